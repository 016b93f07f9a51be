#include "ttlab/certificates.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>

namespace ttlab {

namespace {

int slot_of(int corner_or_slot) { return corner_or_slot % 3; }

// Darts of a whose twin lies in b.
template <class Twin>
std::vector<int> shared_darts(const Twin& twin, int a, int b) {
  std::vector<int> out;
  for (int s = 0; s < 3; ++s) {
    const int t = twin(3 * a + s);
    if (t >= 0 && t / 3 == b) out.push_back(3 * a + s);
  }
  return out;
}

// Matched side pairs of a fold along (sa, sb): sa+1 <-> sb+2, sa+2 <-> sb+1.
std::array<std::array<int, 2>, 2> matched_sides(int sa, int sb) {
  return {{{Triangulation2D::next(sa), Triangulation2D::prev(sb)},
           {Triangulation2D::prev(sa), Triangulation2D::next(sb)}}};
}

// Removes faces a and b, joining the neighbours reached by alternating
// between twins and matched sides. Unset twins (-1) stay unset.
void refold(std::vector<int>& twin, int a, int b, int sa, int sb) {
  const auto m = matched_sides(sa, sb);
  auto inside = [&](int d) { return d >= 0 && (d / 3 == a || d / 3 == b); };
  auto match = [&](int d) {
    for (const auto& p : m) {
      if (p[0] == d) return p[1];
      if (p[1] == d) return p[0];
    }
    return -1;
  };
  std::vector<std::pair<int, int>> joins;
  for (const auto& p : m) {
    for (int start : p) {
      const int x = twin[start];
      if (x < 0 || inside(x)) continue;
      int cur = start;
      int y = -1;
      for (int guard = 0; guard < 8; ++guard) {
        y = twin[match(cur)];
        if (!inside(y)) break;
        cur = y;
      }
      if (inside(y)) throw Error(ErrorCode::InvariantViolation, "fold does not close up");
      joins.push_back({x, y});
    }
  }
  for (auto [x, y] : joins) twin[x] = y;
  for (int f : {a, b}) {
    for (int s = 0; s < 3; ++s) twin[3 * f + s] = -1;
  }
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

char to_char(PairCase c) {
  return c == PairCase::Forbidden ? 'x' : static_cast<char>('a' + static_cast<int>(c));
}

const char* to_string(LcError e) {
  switch (e) {
    case LcError::None: return "OK";
    case LcError::DeadTriangle: return "DeadTriangle";
    case LcError::NonAdjacentPair: return "NonAdjacentPair";
    case LcError::InadmissibleStep: return "InadmissibleStep";
    case LcError::NonEmptyBoundary: return "NonEmptyBoundary";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Boundary surface.

BoundarySurface::BoundarySurface(const Triangulation2D& base, std::span<const int> distinguished)
    : twin_(base.twins().begin(), base.twins().end()), alive_(base.num_faces(), 1), live_(base.num_faces()) {
  if (!distinguished.empty()) {
    dist_.assign(twin_.size(), 0);
    for (int d : distinguished) {
      if (d < 0 || d >= static_cast<int>(twin_.size())) throw Error(ErrorCode::InvalidArgument, "dart out of range");
      dist_[d] = dist_[twin_[d]] = 1;
    }
  }
}

PairClass BoundarySurface::classify(int a, int b) const {
  PairClass out;
  if (a == b || !alive(a) || !alive(b)) return out;
  const auto twin = [&](int d) { return twin_[d]; };
  const auto shared = shared_darts(twin, a, b);
  if (shared.empty()) return out;
  out.adjacent = true;
  if (!avoiding()) {
    out.sigma = shared.front();
    return out;
  }
  std::vector<int> plain;
  for (int d : shared) {
    if (!distinguished(d)) plain.push_back(d);
  }
  if (plain.empty()) return out;
  const int sa = plain.front(), sb = twin_[sa];
  out.sigma = sa;

  enum Kind { N, E, Es };
  const auto m = matched_sides(sa, sb);
  std::array<Kind, 2> kind{};
  int crossed = 0;
  for (int i = 0; i < 2; ++i) {
    const auto [x, y] = m[i];
    if (distinguished(x) != distinguished(y)) return out;
    if (!distinguished(x)) {
      kind[i] = N;
    } else if (twin_[x] == y) {
      kind[i] = Es;
    } else {
      kind[i] = E;
      if (twin_[x] == m[1 - i][1]) ++crossed;
    }
  }
  if (plain.size() > 1) {
    out.tag = PairCase::Forbidden;
  } else if (crossed == 2) {
    out.tag = PairCase::H;
  } else if (crossed == 1) {
    out.tag = PairCase::G;
  } else {
    const int lo = std::min(kind[0], kind[1]), hi = std::max(kind[0], kind[1]);
    static constexpr PairCase table[3][3] = {{PairCase::A, PairCase::B, PairCase::D},
                                             {PairCase::B, PairCase::C, PairCase::E},
                                             {PairCase::D, PairCase::E, PairCase::F}};
    out.tag = table[lo][hi];
  }
  return out;
}

BoundarySurface::Fold BoundarySurface::glue(int a, int b, int sigma) {
  if (a == b || !alive(a) || !alive(b) || sigma / 3 != a || twin_[sigma] / 3 != b) {
    throw Error(ErrorCode::InvalidArgument, "faces are not adjacent along the given dart");
  }
  Fold f;
  f.a = a;
  f.b = b;
  f.sigma_a = sigma;
  f.sigma_b = twin_[sigma];
  f.corners = {{{tail_corner(f.sigma_a), head_corner(f.sigma_b)},
                {head_corner(f.sigma_a), tail_corner(f.sigma_b)},
                {f.sigma_a, f.sigma_b}}};
  refold(twin_, a, b, f.sigma_a, f.sigma_b);
  alive_[a] = alive_[b] = 0;
  live_ -= 2;
  return f;
}

std::vector<AdmissiblePair> admissible_pairs(const BoundarySurface& s) {
  std::vector<AdmissiblePair> out;
  for (int a = 0; a < s.num_faces(); ++a) {
    for (int b = a + 1; b < s.num_faces(); ++b) {
      const PairClass c = s.classify(a, b);
      if (c.tag && *c.tag != PairCase::Forbidden) out.push_back({a, b, c.sigma, *c.tag});
    }
  }
  return out;
}

std::vector<AdmissiblePair> admissible_pairs(const Triangulation2D& boundary) {
  const auto darts = boundary.distinguished_darts();
  return admissible_pairs(BoundarySurface(boundary, darts));
}

// ---------------------------------------------------------------------------
// Local constructions.

LcReplay run_local_construction(const LocalConstruction& lc, bool avoid) {
  LcReplay out;
  const TreeOfTetrahedra& base = lc.base;
  const Triangulation2D surface0 = tree_boundary(base);
  avoid = avoid && !lc.avoided.empty();
  BoundarySurface surface(surface0, avoid ? std::span<const int>(lc.avoided) : std::span<const int>{});

  Triangulation3D T(base.num_tetrahedra());
  std::vector<std::array<int, 2>> t0;
  for (int k = 0; k < base.num_tetrahedra(); ++k) {
    for (int q = 0; q < 4; ++q) {
      const auto& g = base.gluing[k][q];
      if (g.glued() && (k < g.tet || (k == g.tet && q < g.face))) {
        T.glue(k, q, g.tet, g.face, g.perm);
        t0.push_back({k, q});
      }
    }
  }
  auto fail = [&](LcError e, int step) {
    out.error = e;
    out.step = step;
    return out;
  };
  std::vector<std::array<int, 3>> sigma_sides;  // (tet, local tail, local head)
  const int F = surface.num_faces();
  for (int i = 0; i < static_cast<int>(lc.steps.size()); ++i) {
    const LcStep& st = lc.steps[i];
    if (st.a < 0 || st.a >= F || st.b < 0 || st.b >= F || st.sigma < 0 || st.sigma > 2 || !surface.alive(st.a) ||
        !surface.alive(st.b) || st.a == st.b) {
      return fail(LcError::DeadTriangle, i);
    }
    const int dart = 3 * st.a + st.sigma;
    if (surface.twin(dart) / 3 != st.b) return fail(LcError::NonAdjacentPair, i);
    if (avoid) {
      const PairClass c = surface.classify(st.a, st.b);
      if (!c.tag || *c.tag == PairCase::Forbidden || c.sigma != dart) return fail(LcError::InadmissibleStep, i);
      out.tags.push_back(*c.tag);
      for (int x = 0; x < F; ++x) {
        for (int y = x + 1; y < F; ++y) {
          const PairClass o = surface.classify(x, y);
          if (o.tag == PairCase::Forbidden) ++out.forbidden;
        }
      }
    }
    const auto fold = surface.glue(st.a, st.b, dart);
    out.sigma_b.push_back(fold.sigma_b);
    const BoundaryFace& A = base.boundary[st.a];
    const BoundaryFace& B = base.boundary[st.b];
    std::array<int, 4> perm{};
    perm[A.face] = B.face;
    for (const auto& [ca, cb] : fold.corners) perm[A.local[slot_of(ca)]] = B.local[slot_of(cb)];
    T.glue(A.tet, A.face, B.tet, B.face, perm);
    sigma_sides.push_back({A.tet, A.local[slot_of(tail_corner(dart))], A.local[slot_of(head_corner(dart))]});
  }
  if (surface.live_faces() != 0) return fail(LcError::NonEmptyBoundary, static_cast<int>(lc.steps.size()));

  T.set_tree(t0);
  std::vector<char> used(T.num_edges(), 0);
  for (const auto& [k, u, v] : sigma_sides) {
    const int e = T.edge_class(k, u, v);
    out.sigma_edges.push_back(e);
    used[e] = 1;
  }
  std::vector<int> critical;
  for (int e = 0; e < T.num_edges(); ++e) {
    if (!used[e]) critical.push_back(e);
  }
  T.set_edge_tree(std::move(critical));
  T.set_root(lc.root);
  out.T = std::move(T);
  return out;
}

// ---------------------------------------------------------------------------
// Collapses.

std::optional<CollapsingSequence> collapse_onto(const EmbeddedComplex2& c, std::span<const int> keep, PeelOrder order,
                                                std::uint64_t seed) {
  const int E = c.num_edges();
  std::vector<char> kept(E, 0), removed(E, 0), tri_alive(c.num_triangles(), 1);
  for (int e : keep) kept.at(e) = 1;
  std::vector<int> live_slots(E);
  for (int e = 0; e < E; ++e) live_slots[e] = static_cast<int>(c.edge_slots(e).size());
  std::mt19937_64 rng(seed);

  CollapsingSequence cs;
  int remaining = c.num_triangles();
  while (remaining > 0) {
    std::vector<int> free;
    for (int e = 0; e < E; ++e) {
      if (!kept[e] && !removed[e] && live_slots[e] == 2) free.push_back(e);
    }
    if (free.empty()) return std::nullopt;
    int e = free.front();
    if (order == PeelOrder::Highest) e = free.back();
    if (order == PeelOrder::Random) e = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
    int tri = -1;
    for (int s : c.edge_slots(e)) {
      if (tri_alive[c.triangle(s / 3)]) tri = c.triangle(s / 3);
    }
    cs.steps.push_back({e, tri});
    removed[e] = 1;
    tri_alive[tri] = 0;
    --remaining;
    for (int s = 0; s < c.num_slots(); ++s) {
      if (c.triangle(s / 3) == tri) --live_slots[c.edge(s)];
    }
  }
  return cs;
}

CollapsingSequence collapse_tree_of_triangles(const EmbeddedComplex2& c, std::span<const int> e_prime,
                                              PeelOrder order, std::uint64_t seed) {
  if (!c.is_tree_of_triangles()) throw Error(ErrorCode::InvalidArgument, "complex is not a tree of triangles");
  std::vector<std::pair<int, int>> graph;
  for (int e : e_prime) {
    if (e < 0 || e >= c.num_edges() || !c.is_free(e)) throw Error(ErrorCode::InvalidArgument, "E' edge is not free");
    graph.push_back(c.edge_vertices(e));
  }
  if (!is_spanning_tree(c.num_vertices(), graph)) throw Error(ErrorCode::InvalidArgument, "E' is not a spanning tree");
  auto cs = collapse_onto(c, e_prime, order, seed);
  if (!cs) throw Error(ErrorCode::InvariantViolation, "tree of triangles got stuck while collapsing");
  return std::move(*cs);
}

std::optional<std::string> check_collapse(const EmbeddedComplex2& c, const CollapsingSequence& cs) {
  const int E = c.num_edges();
  std::vector<char> removed(E, 0), tri_alive(c.num_triangles(), 1);
  std::vector<int> live_slots(E);
  for (int e = 0; e < E; ++e) live_slots[e] = static_cast<int>(c.edge_slots(e).size());
  for (std::size_t i = 0; i < cs.steps.size(); ++i) {
    const auto [e, tri] = cs.steps[i];
    const std::string at = " at step " + std::to_string(i);
    if (e < 0 || e >= E || tri < 0 || tri >= c.num_triangles()) return "id out of range" + at;
    if (removed[e]) return "edge already collapsed" + at;
    if (!tri_alive[tri]) return "triangle already collapsed" + at;
    const auto edges = c.triangle_edges(tri);
    if (std::find(edges.begin(), edges.end(), e) == edges.end()) return "edge is not a side of the triangle" + at;
    if (live_slots[e] != 2) return "edge is not free" + at;
    removed[e] = 1;
    tri_alive[tri] = 0;
    for (int s = 0; s < c.num_slots(); ++s) {
      if (c.triangle(s / 3) == tri) --live_slots[c.edge(s)];
    }
  }
  if (std::count(tri_alive.begin(), tri_alive.end(), 1) != 0) return std::string("triangles remain");
  std::vector<std::pair<int, int>> rest;
  for (int e = 0; e < E; ++e) {
    if (!removed[e]) rest.push_back(c.edge_vertices(e));
  }
  if (!is_spanning_tree(c.num_vertices(), rest)) return std::string("remaining edges are not a spanning tree");
  return std::nullopt;
}

LcCollapse lc_to_collapse(const LocalConstruction& lc) {
  const LcReplay r = run_local_construction(lc, false);
  if (!r) throw Error(ErrorCode::InvalidArgument, std::string("local construction fails: ") + to_string(r.error));
  const Triangulation2D surface = tree_boundary(lc.base);
  std::vector<int> pi_t(surface.num_darts(), -1);
  for (std::size_t i = 0; i < lc.steps.size(); ++i) {
    const int sa = 3 * lc.steps[i].a + lc.steps[i].sigma, sb = r.sigma_b[i];
    pi_t[sa] = sb;
    pi_t[sb] = sa;
    for (const auto& [x, y] : matched_sides(sa, sb)) {
      pi_t[x] = y;
      pi_t[y] = x;
    }
  }
  LcCollapse out{EmbeddedComplex2(std::move(pi_t), {surface.twins().begin(), surface.twins().end()}), {}};
  for (const LcStep& st : lc.steps) {
    out.sequence.steps.push_back({out.complex.edge(3 * st.a + st.sigma), out.complex.triangle(st.a)});
  }
  return out;
}

LocalConstruction collapse_to_lc(const TreeOfTetrahedra& base, const EmbeddedComplex2& complex,
                                 const CollapsingSequence& cs, std::vector<int> avoided, RootCorner root) {
  std::vector<std::vector<int>> copies(complex.num_triangles());
  for (int f = 0; f < complex.num_oriented_triangles(); ++f) copies[complex.triangle(f)].push_back(f);
  LocalConstruction lc{base, {}, std::move(avoided), root};
  for (const auto& [e, tri] : cs.steps) {
    if (tri < 0 || tri >= complex.num_triangles() || copies[tri].size() != 2) {
      throw Error(ErrorCode::InvalidArgument, "collapse step names no triangle");
    }
    const int a = copies[tri][0], b = copies[tri][1];
    int sigma = -1;
    for (int s = 0; s < 3; ++s) {
      if (complex.edge(3 * a + s) == e) {
        if (sigma >= 0) throw Error(ErrorCode::InvalidArgument, "collapsed edge appears twice in its triangle");
        sigma = s;
      }
    }
    if (sigma < 0) throw Error(ErrorCode::InvalidArgument, "collapsed edge is not a side of its triangle");
    lc.steps.push_back({a, b, sigma});
  }
  return lc;
}

TreeOfTetrahedra base_tree(const Triangulation3D& T, const TreeComplex& tc) {
  TreeOfTetrahedra base;
  base.gluing.resize(T.num_tetrahedra());
  for (int k = 0; k < T.num_tetrahedra(); ++k) {
    for (int q = 0; q < 4; ++q) {
      if (T.in_tree(k, q)) base.gluing[k][q] = T.gluing(k, q);
    }
  }
  for (std::size_t f = 0; f < tc.handle.size(); ++f) {
    base.boundary.push_back({tc.handle[f][0], tc.handle[f][1], tc.local[f]});
  }
  return base;
}

namespace {

std::vector<int> e_edges_of(const TreeComplex& tc) {
  std::vector<int> out;
  for (int e = 0; e < tc.complex.num_edges(); ++e) {
    if (tc.boundary.distinguished(tc.complex.edge_slots(e).front())) out.push_back(e);
  }
  return out;
}

void fill_tags(LocalConstruction& lc) {
  const LcReplay r = run_local_construction(lc, true);
  if (!r) throw Error(ErrorCode::InvariantViolation, std::string("certificate does not replay: ") + to_string(r.error));
  for (std::size_t i = 0; i < lc.steps.size(); ++i) lc.steps[i].tag = r.tags[i];
}

}  // namespace

std::optional<LocalConstruction> find_tree_avoiding_lc(const Triangulation3D& T, PeelOrder order, std::uint64_t seed) {
  if (!verify_membership(T).ok()) return std::nullopt;
  const TreeComplex tc = tree_complex(T);
  const auto cut = tc.complex.cut_along(e_edges_of(tc));
  const auto cs = collapse_onto(cut.complex, cut.cut_edges, order, seed);
  if (!cs) return std::nullopt;
  LocalConstruction lc =
      collapse_to_lc(base_tree(T, tc), cut.complex, *cs, tc.boundary.distinguished_darts(), T.root());
  fill_tags(lc);
  return lc;
}

bool is_spanning_tree_of(const Triangulation2D& surface, std::span<const int> darts) {
  std::set<int> edges;
  for (int d : darts) edges.insert(std::min(d, surface.twin(d)));
  std::vector<std::pair<int, int>> g;
  for (int d : edges) g.push_back({surface.origin(d), surface.target(d)});
  return is_spanning_tree(surface.num_vertices(), g);
}

std::optional<LocalConstruction> search_tree_avoiding_lc(const Triangulation3D& T) {
  if (T.num_tetrahedra() < 1 || !T.is_closed()) return std::nullopt;
  std::vector<std::pair<int, int>> dual;
  for (auto [k, f] : T.tree_faces()) dual.push_back({k, T.gluing(k, f).tet});
  if (!is_spanning_tree(T.num_tetrahedra(), dual)) return std::nullopt;
  TreeComplex tc;
  try {
    tc = tree_complex(T);
  } catch (const Error&) {
    return std::nullopt;
  }
  const auto e0 = tc.boundary.distinguished_darts();
  if (e0.empty() || !is_spanning_tree_of(tc.boundary, e0)) return std::nullopt;

  const int F = tc.boundary.num_faces();
  std::map<std::array<int, 2>, int> face_of;
  for (int f = 0; f < F; ++f) face_of[tc.handle[f]] = f;
  std::vector<int> partner(F);
  for (int f = 0; f < F; ++f) {
    const auto& g = T.gluing(tc.handle[f][0], tc.handle[f][1]);
    partner[f] = face_of.at({g.tet, g.face});
  }
  const std::set<int> target_e(T.edge_tree().begin(), T.edge_tree().end());

  std::set<std::vector<char>> dead_ends;
  std::vector<LcStep> steps;
  std::vector<int> sigma_classes;
  auto alive_key = [&](const BoundarySurface& s) {
    std::vector<char> key(F);
    for (int f = 0; f < F; ++f) key[f] = s.alive(f) ? 1 : 0;
    return key;
  };

  std::function<bool(const BoundarySurface&)> dfs = [&](const BoundarySurface& s) {
    if (s.live_faces() == 0) {
      std::set<int> never;
      for (int e = 0; e < T.num_edges(); ++e) never.insert(e);
      for (int e : sigma_classes) never.erase(e);
      return never == target_e;
    }
    const auto key = alive_key(s);
    if (dead_ends.count(key)) return false;
    for (int a = 0; a < F; ++a) {
      const int b = partner[a];
      if (!s.alive(a) || b <= a || !s.alive(b)) continue;
      const PairClass c = s.classify(a, b);
      if (!c.tag || *c.tag == PairCase::Forbidden) continue;
      const int sa = c.sigma, sb = s.twin(sa);
      const auto [ka, qa] = tc.handle[a];
      const auto& g = T.gluing(ka, qa);
      const auto& la = tc.local[a];
      const auto& lb = tc.local[b];
      const bool fits = g.perm[la[slot_of(tail_corner(sa))]] == lb[slot_of(head_corner(sb))] &&
                        g.perm[la[slot_of(head_corner(sa))]] == lb[slot_of(tail_corner(sb))] &&
                        g.perm[la[slot_of(sa)]] == lb[slot_of(sb)];
      if (!fits) continue;
      BoundarySurface next = s;
      next.glue(a, b, sa);
      steps.push_back({a, b, sa % 3, *c.tag});
      sigma_classes.push_back(T.edge_class(ka, la[slot_of(tail_corner(sa))], la[slot_of(head_corner(sa))]));
      if (dfs(next)) return true;
      steps.pop_back();
      sigma_classes.pop_back();
    }
    dead_ends.insert(key);
    return false;
  };
  if (!dfs(BoundarySurface(tc.boundary, e0))) return std::nullopt;
  return LocalConstruction{base_tree(T, tc), steps, e0, T.root()};
}

// ---------------------------------------------------------------------------
// Reduction sequences.

ReductionState::ReductionState(const OuterplanarTriangulation& t0)
    : twin_(3 * t0.num_triangles()), alive_(t0.num_triangles(), 1) {
  for (int s = 0; s < 3 * t0.num_triangles(); ++s) twin_[s] = t0.diagonal_twin(s);
}

std::optional<int> ReductionState::admissible(int a, int b) const {
  const int T = static_cast<int>(alive_.size());
  if (a == b || a < 0 || b < 0 || a >= T || b >= T || !alive(a) || !alive(b)) return std::nullopt;
  const auto shared = shared_darts([&](int d) { return twin_[d]; }, a, b);
  if (shared.size() != 1) return std::nullopt;
  const int sa = shared.front();
  for (const auto& [x, y] : matched_sides(sa, twin_[sa])) {
    if ((twin_[x] < 0) != (twin_[y] < 0)) return std::nullopt;
  }
  return sa % 3;
}

std::array<std::array<int, 2>, 3> ReductionState::apply(int a, int b, int slot) {
  const int sa = 3 * a + slot, sb = twin_[sa];
  if (!alive(a) || !alive(b) || sb < 0 || sb / 3 != b) {
    throw Error(ErrorCode::InvalidArgument, "triangles do not share the given side");
  }
  const auto m = matched_sides(sa, sb);
  refold(twin_, a, b, sa, sb);
  alive_[a] = alive_[b] = 0;
  return {{{sa, sb}, m[0], m[1]}};
}

namespace {

// Simulates the sequence; fills boundary matches when `pi` is given.
bool simulate(const ReductionSequence& rs, std::vector<int>* pi) {
  const OuterplanarTriangulation& t = rs.t0;
  const int T = t.num_triangles();
  if (static_cast<int>(rs.pairing.size()) != T) return false;
  for (int i = 0; i < T; ++i) {
    const int j = rs.pairing[i];
    if (j < 0 || j >= T || j == i || rs.pairing[j] != i) return false;
  }
  if (static_cast<int>(rs.order.size()) * 2 != T) return false;
  ReductionState state(t);
  if (pi) pi->assign(t.boundary_size(), -1);
  for (const auto& [a, b] : rs.order) {
    if (a < 0 || a >= T || rs.pairing[a] != b) return false;
    const auto slot = state.admissible(a, b);
    if (!slot) return false;
    const auto m = state.apply(a, b, *slot);
    if (!pi) continue;
    for (int i = 1; i < 3; ++i) {
      const int x = t.boundary_label(m[i][0]), y = t.boundary_label(m[i][1]);
      if (x >= 0) {
        (*pi)[x] = y;
        (*pi)[y] = x;
      }
    }
  }
  return true;
}

}  // namespace

bool reduction_sequence_check(const ReductionSequence& rs) { return simulate(rs, nullptr); }

std::optional<NonCrossingPairing> pi_h_from_reduction(const ReductionSequence& rs) {
  std::vector<int> pi;
  if (!simulate(rs, &pi)) return std::nullopt;
  if (std::find(pi.begin(), pi.end(), -1) != pi.end()) return std::nullopt;
  try {
    return NonCrossingPairing(std::move(pi));
  } catch (const Error&) {
    return std::nullopt;
  }
}

InducedReduction reduction_from_lc(const LocalConstruction& lc) {
  if (lc.avoided.empty()) throw Error(ErrorCode::InvalidArgument, "construction avoids no tree");
  Triangulation2D surface = tree_boundary(lc.base);
  surface.set_distinguished(lc.avoided);
  int root = -1;
  for (int f = 0; f < surface.num_faces(); ++f) {
    const auto& b = lc.base.boundary[f];
    if (b.tet != lc.root.tet || b.face != lc.root.face) continue;
    for (int s = 0; s < 3; ++s) {
      if (b.local[(s + 1) % 3] == lc.root.u && b.local[(s + 2) % 3] == lc.root.v) root = 3 * f + s;
    }
  }
  if (root < 0) throw Error(ErrorCode::InvalidArgument, "root corner is not on the base boundary");
  surface.set_root(root);
  InducedReduction out;
  out.cut = unglue(surface);
  const auto& tri = out.cut.face_to_triangle;
  out.sequence.t0 = out.cut.t;
  out.sequence.pairing.assign(out.cut.t.num_triangles(), -1);
  for (const LcStep& st : lc.steps) {
    const int a = tri[st.a], b = tri[st.b];
    out.sequence.pairing[a] = b;
    out.sequence.pairing[b] = a;
    out.sequence.order.push_back({a, b});
  }
  return out;
}

ConverseReport reduction_converse_report(int n) {
  ConverseReport rep;
  rep.n = n;
  const auto pairings = enumerate_pairings(n);
  for_each_outerplanar(n, [&](const OuterplanarTriangulation& t) {
    for (const auto& pa : pairings) {
      if (n < 3 || !is_in_A(t, pa.partner())) continue;
      ++rep.bases;
      const Triangulation2D a = glue(t, pa.partner());
      const TreeOfTetrahedra base = tetra_tree_from_apollonian(a);
      const int s0 = t.boundary_slot(0);
      const auto& b0 = base.boundary[s0 / 3];
      const RootCorner root{b0.tet, b0.face, b0.local[tail_corner(s0) % 3], b0.local[head_corner(s0) % 3]};
      const auto avoided = a.distinguished_darts();
      const int T = t.num_triangles();

      ReductionSequence rs{t, std::vector<int>(T, -1), {}};
      std::function<void(const ReductionState&)> walk = [&](const ReductionState& state) {
        if (2 * rs.order.size() == static_cast<std::size_t>(T)) {
          ++rep.sequences;
          const auto pi = pi_h_from_reduction(rs);
          if (pi && is_in_H(t, pi->partner())) ++rep.hierarchical;
          LocalConstruction lc{base, {}, avoided, root};
          ReductionState replay(t);
          for (const auto& [x, y] : rs.order) {
            const int slot = *replay.admissible(x, y);
            replay.apply(x, y, slot);
            lc.steps.push_back({x, y, slot});
          }
          const LcReplay r = run_local_construction(lc, true);
          if (r) {
            ++rep.talc;
            if (verify_membership(*r.T).ok()) ++rep.members;
          }
          return;
        }
        for (int x = 0; x < T; ++x) {
          for (int y = x + 1; y < T; ++y) {
            const auto slot = state.admissible(x, y);
            if (!slot) continue;
            ReductionState next = state;
            next.apply(x, y, *slot);
            rs.pairing[x] = y;
            rs.pairing[y] = x;
            rs.order.push_back({x, y});
            walk(next);
            rs.order.pop_back();
            rs.pairing[x] = rs.pairing[y] = -1;
          }
        }
      };
      walk(ReductionState(t));
    }
  });
  return rep;
}

// ---------------------------------------------------------------------------
// Discrete Morse theory.

SimplexIndex::SimplexIndex(const Triangulation3D& T) {
  const int tets = T.num_tetrahedra();
  count = {T.num_vertices(), T.num_edges(), 0, tets};
  triangle_of.assign(4 * tets, -1);
  edge_ends.assign(T.num_edges(), {-1, -1});
  for (int k = 0; k < tets; ++k) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        auto& ends = edge_ends[T.edge_class(k, a, b)];
        if (ends[0] < 0) ends = {T.vertex_class(k, a), T.vertex_class(k, b)};
      }
    }
  }
  for (int k = 0; k < tets; ++k) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = T.gluing(k, f);
      if (std::pair(g.tet, g.face) < std::pair(k, f)) continue;
      const int id = count[2]++;
      triangle_rep.push_back({k, f});
      triangle_of[4 * k + f] = id;
      triangle_of[4 * g.tet + g.face] = id;
      std::array<int, 3> v{};
      int i = 0;
      for (int x = 0; x < 4; ++x) {
        if (x != f) v[i++] = x;
      }
      triangle_edges.push_back({T.edge_class(k, v[1], v[2]), T.edge_class(k, v[0], v[2]), T.edge_class(k, v[0], v[1])});
    }
  }
  tet_triangles.resize(tets);
  for (int k = 0; k < tets; ++k) {
    for (int f = 0; f < 4; ++f) tet_triangles[k][f] = triangle_of[4 * k + f];
  }
}

std::vector<int> SimplexIndex::facets(int dim, int cell) const {
  switch (dim) {
    case 1: return {edge_ends[cell].begin(), edge_ends[cell].end()};
    case 2: return {triangle_edges[cell].begin(), triangle_edges[cell].end()};
    case 3: return {tet_triangles[cell].begin(), tet_triangles[cell].end()};
    default: throw Error(ErrorCode::InvalidArgument, "cells of this dimension have no facets");
  }
}

std::vector<DiscreteVectorField::Pair> DiscreteVectorField::layer(int dim) const {
  std::vector<Pair> out;
  for (const auto& p : pairs) {
    if (p.dim == dim) out.push_back(p);
  }
  return out;
}

namespace {

void fill_critical(DiscreteVectorField& f, const std::array<int, 4>& count) {
  std::sort(f.pairs.begin(), f.pairs.end());
  std::array<std::vector<char>, 4> used;
  for (int d = 0; d < 4; ++d) used[d].assign(count[d], 0);
  for (const auto& p : f.pairs) {
    used[p.dim][p.cell] = 1;
    used[p.dim + 1][p.cofacet] = 1;
  }
  for (int d = 0; d < 4; ++d) {
    f.critical[d].clear();
    for (int c = 0; c < count[d]; ++c) {
      if (!used[d][c]) f.critical[d].push_back(c);
    }
  }
}

}  // namespace

DiscreteVectorField morse_from_lc(const LocalConstruction& lc) {
  const LcReplay r = run_local_construction(lc, !lc.avoided.empty());
  if (!r) throw Error(ErrorCode::InvalidArgument, std::string("local construction fails: ") + to_string(r.error));
  const Triangulation3D& T = *r.T;
  const SimplexIndex ix(T);
  DiscreteVectorField f;

  for (std::size_t i = 0; i < lc.steps.size(); ++i) {
    const auto& A = lc.base.boundary[lc.steps[i].a];
    f.pairs.push_back({1, r.sigma_edges[i], ix.triangle(A.tet, A.face)});
  }

  // Vertices flow along E towards the root vertex.
  const int root_vertex = T.vertex_class(lc.root.tet, lc.root.u);
  std::vector<std::vector<std::pair<int, int>>> adj(ix.count[0]);
  for (int e : T.edge_tree()) {
    const auto [u, v] = ix.edge_ends[e];
    adj[u].push_back({v, e});
    adj[v].push_back({u, e});
  }
  std::vector<char> seen(ix.count[0], 0);
  std::queue<int> q;
  q.push(root_vertex);
  seen[root_vertex] = 1;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (auto [v, e] : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      f.pairs.push_back({0, v, e});
      q.push(v);
    }
  }

  // Tetrahedra flow along the dual tree of T0 towards the root tetrahedron.
  std::vector<char> reached(ix.count[3], 0);
  q.push(lc.root.tet);
  reached[lc.root.tet] = 1;
  while (!q.empty()) {
    const int k = q.front();
    q.pop();
    for (int face = 0; face < 4; ++face) {
      if (!T.in_tree(k, face)) continue;
      const int j = T.gluing(k, face).tet;
      if (reached[j]) continue;
      reached[j] = 1;
      f.pairs.push_back({2, ix.triangle(k, face), j});
      q.push(j);
    }
  }
  fill_critical(f, ix.count);
  return f;
}

bool is_valid_field(const Triangulation3D& T, const DiscreteVectorField& f) {
  const SimplexIndex ix(T);
  std::array<std::vector<char>, 4> used;
  for (int d = 0; d < 4; ++d) used[d].assign(ix.count[d], 0);
  for (const auto& p : f.pairs) {
    if (p.dim < 0 || p.dim > 2 || p.cell < 0 || p.cell >= ix.count[p.dim] || p.cofacet < 0 ||
        p.cofacet >= ix.count[p.dim + 1]) {
      return false;
    }
    if (used[p.dim][p.cell]++ || used[p.dim + 1][p.cofacet]++) return false;
    const auto fs = ix.facets(p.dim + 1, p.cofacet);
    if (std::find(fs.begin(), fs.end(), p.cell) == fs.end()) return false;
  }
  return true;
}

bool is_acyclic(const Triangulation3D& T, const DiscreteVectorField& f) {
  const SimplexIndex ix(T);
  for (int d = 0; d < 3; ++d) {
    // Nodes: d-cells, then (d+1)-cells offset by count[d].
    const int lo = ix.count[d];
    std::vector<std::vector<int>> out(lo + ix.count[d + 1]);
    std::vector<int> up(lo, -1), down(ix.count[d + 1], -1);
    for (const auto& p : f.pairs) {
      if (p.dim != d) continue;
      up[p.cell] = p.cofacet;
      down[p.cofacet] = p.cell;
      out[p.cell].push_back(lo + p.cofacet);
    }
    for (int b = 0; b < ix.count[d + 1]; ++b) {
      bool skipped = false;
      for (int a : ix.facets(d + 1, b)) {
        if (a == down[b] && !skipped) {
          skipped = true;
          continue;
        }
        out[lo + b].push_back(a);
      }
    }
    std::vector<char> color(out.size(), 0);
    for (int s = 0; s < static_cast<int>(out.size()); ++s) {
      if (color[s]) continue;
      std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
      color[s] = 1;
      while (!stack.empty()) {
        auto& [v, i] = stack.back();
        if (i == out[v].size()) {
          color[v] = 2;
          stack.pop_back();
          continue;
        }
        const int w = out[v][i++];
        if (color[w] == 1) return false;
        if (color[w] == 0) {
          color[w] = 1;
          stack.push_back({w, 0});
        }
      }
    }
  }
  return true;
}

std::optional<DiscreteVectorField> morse_uniqueness(const EmbeddedComplex2& c, std::span<const int> e) {
  std::vector<int> keep = sorted_unique({e.begin(), e.end()});
  std::vector<std::pair<int, int>> graph;
  for (int x : keep) {
    if (x < 0 || x >= c.num_edges()) throw Error(ErrorCode::InvalidArgument, "edge out of range");
    graph.push_back(c.edge_vertices(x));
  }
  if (!is_spanning_tree(c.num_vertices(), graph)) throw Error(ErrorCode::InvalidArgument, "e is not a spanning tree");
  std::optional<std::vector<CollapseStep>> first;
  bool any = false, none = false;
  const std::array<std::pair<PeelOrder, std::uint64_t>, 4> orders{
      {{PeelOrder::Lowest, 0}, {PeelOrder::Highest, 0}, {PeelOrder::Random, 1}, {PeelOrder::Random, 2}}};
  for (const auto& [order, seed] : orders) {
    auto cs = collapse_onto(c, keep, order, seed);
    if (cs) {
      // Every edge outside e must be matched for only e to stay critical.
      if (static_cast<int>(cs->steps.size() + keep.size()) != c.num_edges()) cs.reset();
    }
    if (!cs) {
      none = true;
      continue;
    }
    any = true;
    auto steps = cs->steps;
    std::sort(steps.begin(), steps.end(),
              [](const CollapseStep& x, const CollapseStep& y) { return std::pair(x.edge, x.triangle) < std::pair(y.edge, y.triangle); });
    if (!first) {
      first = steps;
    } else if (*first != steps) {
      throw Error(ErrorCode::InvariantViolation, "peeling orders disagree on the gradient");
    }
  }
  if (any && none) throw Error(ErrorCode::InvariantViolation, "peeling succeeds in one order only");
  if (!any) return std::nullopt;
  DiscreteVectorField f;
  for (const auto& s : *first) f.pairs.push_back({1, s.edge, s.triangle});
  fill_critical(f, {c.num_vertices(), c.num_edges(), c.num_triangles(), 0});
  return f;
}

TreeComplexIds tree_complex_ids(const Triangulation3D& T, const TreeComplex& tc, const SimplexIndex& ix) {
  TreeComplexIds out;
  const EmbeddedComplex2& c = tc.complex;
  out.edge.resize(c.num_edges());
  for (int e = 0; e < c.num_edges(); ++e) {
    const int slot = c.edge_slots(e).front();
    const int f = slot / 3, s = slot % 3;
    out.edge[e] = T.edge_class(tc.handle[f][0], tc.local[f][(s + 1) % 3], tc.local[f][(s + 2) % 3]);
  }
  out.triangle.resize(c.num_triangles());
  for (int f = 0; f < c.num_oriented_triangles(); ++f) {
    out.triangle[c.triangle(f)] = ix.triangle(tc.handle[f][0], tc.handle[f][1]);
  }
  return out;
}

}  // namespace ttlab
