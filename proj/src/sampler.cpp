#include "ttlab/sampler.hpp"

#include <algorithm>
#include <bit>
#include <atomic>
#include <chrono>
#include <limits>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>
#include <unordered_set>

#include <boost/math/distributions/chi_squared.hpp>

#include "ttlab/complexes.hpp"
#include "ttlab/enumeration.hpp"
#include "ttlab/meander.hpp"

namespace ttlab {

const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::Grow: return "grow";
    case MoveKind::Shrink: return "shrink";
    case MoveKind::RepairH: return "repair-h";
    case MoveKind::RepairA: return "repair-a";
    case MoveKind::Reroot: return "reroot";
    case MoveKind::TreeSwap: return "tree-swap";
    case MoveKind::EdgeSwap: return "edge-swap";
    case MoveKind::Pachner23: return "pachner-2-3";
    case MoveKind::Pachner32: return "pachner-3-2";
    case MoveKind::PillowIn: return "pillow-in";
    case MoveKind::PillowOut: return "pillow-out";
  }
  return "?";
}

MoveKind reverse(MoveKind k) {
  switch (k) {
    case MoveKind::Grow: return MoveKind::Shrink;
    case MoveKind::Shrink: return MoveKind::Grow;
    case MoveKind::Pachner23: return MoveKind::Pachner32;
    case MoveKind::Pachner32: return MoveKind::Pachner23;
    case MoveKind::PillowIn: return MoveKind::PillowOut;
    case MoveKind::PillowOut: return MoveKind::PillowIn;
    default: return k;
  }
}

namespace {

std::int64_t choose(std::int64_t n, int k) {
  if (n < k) return 0;
  std::int64_t c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

// --- local retriangulation -------------------------------------------------

// Where a face of a replaced tetrahedron lands: (tet, face) in the new
// numbering plus old local vertex -> new local vertex. `survivor` tets are
// given by their old id.
struct FaceImage {
  int tet = -1;
  int face = -1;
  std::array<int, 4> local{0, 1, 2, 3};
  bool survivor = false;
};

struct Rebuild {
  std::vector<int> removed;
  int added = 0;
  std::map<std::pair<int, int>, FaceImage> faces;  // faces of removed tets that stay
  std::vector<std::pair<int, int>> unglued;        // faces whose old gluing is not carried over
  struct Inner {
    int tet, face;  // an added tet, or a survivor's old id
    bool survivor;
    int target, target_face;  // added tet
    std::array<int, 4> perm;
  };
  std::vector<Inner> inner;
  std::vector<std::array<int, 2>> inner_tree;  // (added tet, face) joining T0
  std::vector<std::pair<int, int>> tree_exclude;  // old faces never carried into T0
  std::vector<std::pair<int, int>> tree_include;  // old faces forced into T0
  int drop_edge = -1;
  std::vector<std::array<int, 3>> add_edges;  // (added tet, u, v)
};

std::optional<Triangulation3D> rebuild(const Triangulation3D& T, const Rebuild& r) {
  const int old = T.num_tetrahedra();
  std::vector<int> id(old, -1);
  int base = 0;
  for (int k = 0; k < old; ++k) {
    if (std::find(r.removed.begin(), r.removed.end(), k) == r.removed.end()) id[k] = base++;
  }
  auto is_unglued = [&](int t, int f) {
    return std::find(r.unglued.begin(), r.unglued.end(), std::pair(t, f)) != r.unglued.end();
  };
  auto image = [&](int t, int f) -> std::optional<FaceImage> {
    auto it = r.faces.find({t, f});
    if (it != r.faces.end()) {
      FaceImage im = it->second;
      im.tet = im.survivor ? id[im.tet] : base + im.tet;
      return im;
    }
    if (id[t] >= 0) return FaceImage{id[t], f, {0, 1, 2, 3}, false};
    return std::nullopt;
  };
  Triangulation3D U(base + r.added);
  for (int k = 0; k < old; ++k) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = T.gluing(k, f);
      if (std::pair(g.tet, g.face) < std::pair(k, f)) continue;
      if (is_unglued(k, f) || is_unglued(g.tet, g.face)) continue;
      auto s = image(k, f);
      auto d = image(g.tet, g.face);
      if (!s || !d) continue;
      std::array<int, 4> inv{};
      for (int v = 0; v < 4; ++v) inv[s->local[v]] = v;
      std::array<int, 4> perm{};
      for (int v = 0; v < 4; ++v) perm[v] = d->local[g.perm[inv[v]]];
      U.glue(s->tet, s->face, d->tet, d->face, perm);
    }
  }
  for (const auto& in : r.inner) {
    const int a = in.survivor ? id[in.tet] : base + in.tet;
    U.glue(a, in.face, base + in.target, in.target_face, in.perm);
  }
  if (!U.is_closed()) return std::nullopt;

  auto excluded = [&](int k, int f) {
    const auto& g = T.gluing(k, f);
    for (auto x : r.tree_exclude) {
      if (x == std::pair(k, f) || x == std::pair(g.tet, g.face)) return true;
    }
    return false;
  };
  std::vector<std::array<int, 2>> tree;
  for (auto [k, f] : T.tree_faces()) {
    if (excluded(k, f)) continue;
    auto s = image(k, f);
    if (!s) {
      const auto& g = T.gluing(k, f);
      s = image(g.tet, g.face);
    }
    if (s) tree.push_back({s->tet, s->face});
  }
  for (auto [k, f] : r.tree_include) {
    auto s = image(k, f);
    if (!s) return std::nullopt;
    tree.push_back({s->tet, s->face});
  }
  for (auto [a, f] : r.inner_tree) tree.push_back({base + a, f});
  U.set_tree(tree);

  // Every surviving edge of E lies in some face that is carried over.
  std::vector<int> e;
  for (int c : T.edge_tree()) {
    if (c == r.drop_edge) continue;
    std::optional<int> found;
    for (int k = 0; k < old && !found; ++k) {
      for (int u = 0; u < 4 && !found; ++u) {
        for (int v = u + 1; v < 4 && !found; ++v) {
          if (T.edge_class(k, u, v) != c) continue;
          for (int f = 0; f < 4; ++f) {
            if (f == u || f == v) continue;
            auto s = image(k, f);
            if (!s) continue;
            found = U.edge_class(s->tet, s->local[u], s->local[v]);
            break;
          }
        }
      }
    }
    if (!found) return std::nullopt;
    e.push_back(*found);
  }
  for (auto [a, u, v] : r.add_edges) e.push_back(U.edge_class(base + a, u, v));
  U.set_edge_tree(e);

  const auto& root = T.root();
  auto s = image(root.tet, root.face);
  if (!s) return std::nullopt;
  U.set_root({s->tet, s->face, s->local[root.u], s->local[root.v]});
  return U;
}

// Internal faces, each once, from the side with the smaller (tet, face).
std::vector<std::array<int, 2>> internal_faces(const Triangulation3D& T) {
  std::vector<std::array<int, 2>> out;
  for (int k = 0; k < T.num_tetrahedra(); ++k) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = T.gluing(k, f);
      if (std::pair(g.tet, g.face) > std::pair(k, f)) out.push_back({k, f});
    }
  }
  return out;
}

// Two tetrahedra A, B sharing face (A, fa) become T_i = (a, b, x_{i+1}, x_{i+2}),
// local order (a, b, x_{i+1}, x_{i+2}); T_i face 2 meets T_{i+1} face 3. When
// the shared face is in T0, `choice` is the inner face left out of T0;
// otherwise it is the one put in.
std::optional<Triangulation3D> pachner_23(const Triangulation3D& T, int A, int fa, int choice) {
  const auto& g = T.gluing(A, fa);
  const int B = g.tet;
  if (B == A) return std::nullopt;
  const auto p = g.perm;
  const int fb = g.face;
  std::array<int, 3> x{};
  for (int v = 0, j = 0; v < 4; ++v) {
    if (v != fa) x[j++] = v;
  }
  Rebuild r;
  r.removed = {A, B};
  r.added = 3;
  for (int i = 0; i < 3; ++i) {
    const int x1 = x[(i + 1) % 3], x2 = x[(i + 2) % 3];
    FaceImage ia{i, 1, {}, false};
    ia.local[fa] = 0;
    ia.local[x[i]] = 1;
    ia.local[x1] = 2;
    ia.local[x2] = 3;
    r.faces[{A, x[i]}] = ia;
    FaceImage ib{i, 0, {}, false};
    ib.local[p[x[i]]] = 0;
    ib.local[fb] = 1;
    ib.local[p[x1]] = 2;
    ib.local[p[x2]] = 3;
    r.faces[{B, p[x[i]]}] = ib;
    r.inner.push_back({i, 2, false, (i + 1) % 3, 3, {0, 1, 3, 2}});
  }
  const bool shared = T.in_tree(A, fa);
  for (int i = 0; i < 3; ++i) {
    if (shared ? i != choice : i == choice) r.inner_tree.push_back({i, 2});
  }
  return rebuild(T, r);
}

// Inverse of pachner_23 around edge class c.
std::optional<Triangulation3D> pachner_32(const Triangulation3D& T, int c) {
  if (T.in_edge_tree(c)) return std::nullopt;
  int t0 = -1, la = -1, lb = -1;
  for (int k = 0; k < T.num_tetrahedra() && t0 < 0; ++k) {
    for (int u = 0; u < 4 && t0 < 0; ++u) {
      for (int v = u + 1; v < 4; ++v) {
        if (T.edge_class(k, u, v) == c) {
          t0 = k, la = u, lb = v;
          break;
        }
      }
    }
  }
  if (t0 < 0) return std::nullopt;
  struct Around {
    int tet, a, b, x1, x2;  // holds x_{i+1}, x_{i+2}
  };
  std::array<Around, 3> ring{};
  int c0 = -1, d0 = -1;
  for (int v = 0; v < 4; ++v) {
    if (v != la && v != lb) (c0 < 0 ? c0 : d0) = v;
  }
  ring[0] = {t0, la, lb, c0, d0};
  for (int i = 0; i < 3; ++i) {
    const auto& cur = ring[i];
    const auto& g = T.gluing(cur.tet, cur.x1);
    const Around next{g.tet, g.perm[cur.a], g.perm[cur.b], g.perm[cur.x2], g.face};
    if (i < 2) {
      ring[i + 1] = next;
    } else if (next.tet != t0 || next.a != la || next.b != lb || next.x1 != c0 || next.x2 != d0) {
      return std::nullopt;
    }
  }
  if (ring[0].tet == ring[1].tet || ring[1].tet == ring[2].tet || ring[0].tet == ring[2].tet) {
    return std::nullopt;
  }
  Rebuild r;
  r.removed = {ring[0].tet, ring[1].tet, ring[2].tet};
  r.added = 2;
  // x_i of the new tetrahedra is local i+1; ring[i] holds x_{i+1}, x_{i+2}.
  // Each ring tet's faces opposite a and b are the outer ones.
  for (int i = 0; i < 3; ++i) {
    const auto& q = ring[i];
    FaceImage fa{0, i + 1, {}, false};
    fa.local[q.a] = 0;
    fa.local[q.b] = i + 1;
    fa.local[q.x1] = (i + 1) % 3 + 1;
    fa.local[q.x2] = (i + 2) % 3 + 1;
    r.faces[{q.tet, q.b}] = fa;
    FaceImage fb{1, i + 1, {}, false};
    fb.local[q.b] = 0;
    fb.local[q.a] = i + 1;
    fb.local[q.x1] = (i + 1) % 3 + 1;
    fb.local[q.x2] = (i + 2) % 3 + 1;
    r.faces[{q.tet, q.a}] = fb;
    r.tree_exclude.push_back({q.tet, q.x1});
  }
  r.inner.push_back({0, 0, false, 1, 0, {0, 1, 2, 3}});
  auto inner_face = [&](int k, int f) {
    for (const auto& q : ring) {
      if (q.tet == k && q.x1 == f) return true;
    }
    return false;
  };
  int outer = 0;
  for (auto [k, f] : T.tree_faces()) {
    const auto& g = T.gluing(k, f);
    if (!inner_face(k, f) && !inner_face(g.tet, g.face)) ++outer;
  }
  const int need = T.num_tetrahedra() - 2;  // T0 faces once two tets replace three
  if (outer + 1 == need) {
    r.inner_tree.push_back({0, 0});
  } else if (outer != need) {
    return std::nullopt;
  }
  return rebuild(T, r);
}

const std::array<std::array<int, 10>, 2>& pillow_subsets() {
  static const auto subsets = [] {
    std::array<std::array<int, 10>, 2> out{};
    std::array<int, 2> fill{};
    for (int mask = 0; mask < 32; ++mask) {
      const int bits = std::popcount(static_cast<unsigned>(mask));
      if (bits == 2 || bits == 3) out[bits - 2][fill[bits - 2]++] = mask;
    }
    return out;
  }();
  return subsets;
}

// Face (X, fx) glued to (Y, fy) opens into P = (v, a, b, c) and Q = (v, a, b, c)
// glued along their three faces at v; P meets X and Q meets Y. The five new
// faces {X-P, Q-Y, PQ1, PQ2, PQ3} contribute `mask` to T0 and E gains v-spoke.
std::optional<Triangulation3D> pillow_in(const Triangulation3D& T, int X, int fx, int mask, int spoke) {
  const auto g = T.gluing(X, fx);
  const int Y = g.tet, fy = g.face;
  Rebuild r;
  r.unglued = {{X, fx}, {Y, fy}};
  r.added = 2;
  const int P = 0, Q = 1;
  std::array<int, 4> xp{};
  for (int k = 0, j = 1; k < 4; ++k) xp[k] = k == fx ? 0 : j++;
  std::array<int, 4> yq{};
  for (int k = 0; k < 4; ++k) yq[g.perm[k]] = xp[k];
  r.inner.push_back({X, fx, true, P, 0, xp});
  r.inner.push_back({Y, fy, true, Q, 0, yq});
  for (int i = 1; i <= 3; ++i) r.inner.push_back({P, i, false, Q, i, {0, 1, 2, 3}});
  const std::array<std::array<int, 2>, 5> faces{{{P, 0}, {Q, 0}, {P, 1}, {P, 2}, {P, 3}}};
  const int need = T.in_tree(X, fx) ? 3 : 2;
  if (std::popcount(static_cast<unsigned>(mask)) != need) return std::nullopt;
  r.tree_exclude.push_back({X, fx});
  for (int b = 0; b < 5; ++b) {
    if (mask >> b & 1) r.inner_tree.push_back(faces[b]);
  }
  r.add_edges.push_back({P, 0, spoke});
  return rebuild(T, r);
}

// Inverse of pillow_in at vertex class vc.
std::optional<Triangulation3D> pillow_out(const Triangulation3D& T, int vc) {
  std::vector<std::array<int, 2>> occ;
  for (int k = 0; k < T.num_tetrahedra(); ++k) {
    for (int v = 0; v < 4; ++v) {
      if (T.vertex_class(k, v) == vc) occ.push_back({k, v});
    }
  }
  if (occ.size() != 2 || occ[0][0] == occ[1][0]) return std::nullopt;
  const auto [P, lp] = occ[0];
  const auto [Q, lq] = occ[1];
  // P's vertex w meets Q's vertex pq[w]; the three faces at v must agree.
  std::array<int, 4> pq{-1, -1, -1, -1};
  for (int f = 0; f < 4; ++f) {
    if (f == lp) continue;
    const auto& g = T.gluing(P, f);
    if (g.tet != Q || g.perm[lp] != lq) return std::nullopt;
    for (int w = 0; w < 4; ++w) {
      if (w == f) continue;
      if (pq[w] >= 0 && pq[w] != g.perm[w]) return std::nullopt;
      pq[w] = g.perm[w];
    }
  }
  const auto gx = T.gluing(P, lp);
  const auto gy = T.gluing(Q, lq);
  const int X = gx.tet, Y = gy.tet;
  if (X == P || X == Q || Y == P || Y == Q) return std::nullopt;
  const auto& root = T.root();
  if (root.tet == P || root.tet == Q) return std::nullopt;

  int in_tree = 0;
  for (int f = 0; f < 4; ++f) in_tree += T.in_tree(P, f);
  in_tree += T.in_tree(Q, lq);
  if (in_tree != 2 && in_tree != 3) return std::nullopt;

  int spokes = 0, spoke = -1;
  for (int w = 0; w < 4; ++w) {
    if (w == lp) continue;
    const int c = T.edge_class(P, lp, w);
    if (T.in_edge_tree(c)) ++spokes, spoke = c;
  }
  if (spokes != 1) return std::nullopt;

  Rebuild r;
  r.removed = {P, Q};
  // P's outer face lands on Y's, so the old X-P gluing becomes X-Y.
  FaceImage to_y{Y, gy.face, {}, true};
  for (int v = 0; v < 4; ++v) to_y.local[v] = gy.perm[v == lp ? lq : pq[v]];
  r.faces[{P, lp}] = to_y;
  r.unglued = {{Q, lq}, {Y, gy.face}};
  r.drop_edge = spoke;
  for (int f = 0; f < 4; ++f) r.tree_exclude.push_back({P, f});
  r.tree_exclude.push_back({Q, lq});
  if (in_tree == 3) r.tree_include.push_back({X, gx.face});
  return rebuild(T, r);
}

// Grow, shrink and reroot preserve triple trees by construction; debug builds
// re-validate every result, release builds rely on the chain's sampled check.
TripleTree validated(TripleTree tt) {
#ifndef NDEBUG
  auto v = validate_triple(tt.t, tt.pi_h, tt.pi_a);
  if (!v || v.tree->loops != tt.loops) throw Error(ErrorCode::InvariantViolation, "move produced an invalid triple");
#endif
  return tt;
}

std::optional<TripleTree> from_triangulation(const std::optional<Triangulation3D>& U) {
  if (!U) return std::nullopt;
  try {
    return triangulation_to_triple(*U);  // membership check and validation included
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MembershipFailed) throw;
    return std::nullopt;
  }
}

}  // namespace

std::vector<int> repaired_partner(std::span<const int> partner, std::int64_t choice) {
  const int n = static_cast<int>(partner.size()) / 2;
  if (choice < 0 || choice >= choice_count(MoveKind::RepairH, n, 0)) {
    throw Error(ErrorCode::InvalidArgument, "repair choice out of range");
  }
  std::vector<int> arcs;
  for (int i = 0; i < 2 * n; ++i) {
    if (partner[i] > i) arcs.push_back(i);
  }
  std::vector<int> picked;
  int alternative = 0;
  const std::int64_t pairs = choose(n, 2);
  auto unrank = [&](std::int64_t idx, int k) {
    // Lexicographic k-subsets of arcs.
    std::vector<int> out;
    int start = 0;
    for (int slot = k; slot > 0; --slot) {
      for (int a = start; a < n; ++a) {
        const std::int64_t below = choose(n - a - 1, slot - 1);
        if (idx < below) {
          out.push_back(a);
          start = a + 1;
          break;
        }
        idx -= below;
      }
    }
    return out;
  };
  if (choice < pairs) {
    picked = unrank(choice, 2);
  } else {
    choice -= pairs;
    picked = unrank(choice / 4, 3);
    alternative = static_cast<int>(choice % 4);
  }
  std::vector<int> ends;
  for (int a : picked) {
    ends.push_back(arcs[a]);
    ends.push_back(partner[arcs[a]]);
  }
  std::sort(ends.begin(), ends.end());
  std::vector<int> p(partner.begin(), partner.end());
  if (ends.size() == 4) {
    if (p[ends[0]] == ends[1]) {
      p[ends[0]] = ends[3], p[ends[3]] = ends[0], p[ends[1]] = ends[2], p[ends[2]] = ends[1];
    } else {
      p[ends[0]] = ends[1], p[ends[1]] = ends[0], p[ends[2]] = ends[3], p[ends[3]] = ends[2];
    }
  } else {
    // The five non-crossing matchings of six points; the current one is skipped.
    static constexpr int kPatterns[5][6] = {
        {1, 0, 3, 2, 5, 4}, {1, 0, 5, 4, 3, 2}, {3, 2, 1, 0, 5, 4}, {5, 2, 1, 4, 3, 0}, {5, 4, 3, 2, 1, 0}};
    int seen = 0;
    for (const auto& pat : kPatterns) {
      bool current = true;
      for (int i = 0; i < 6; ++i) current = current && p[ends[i]] == ends[pat[i]];
      if (current) continue;
      if (seen++ != alternative) continue;
      for (int i = 0; i < 6; ++i) p[ends[i]] = ends[pat[i]];
      break;
    }
  }
  return p;
}

namespace {

// Two- and three-arc re-pairings; crossing results are rejected.
std::optional<TripleTree> repair(const TripleTree& tt, bool hierarchical, std::int64_t choice) {
  const NonCrossingPairing& pi = hierarchical ? tt.pi_h : tt.pi_a;
  std::vector<int> p = repaired_partner(pi.partner(), choice);
  if (!is_non_crossing(p)) return std::nullopt;
  const NonCrossingPairing q(std::move(p));
  auto v = hierarchical ? validate_triple(tt.t, q, tt.pi_a) : validate_triple(tt.t, tt.pi_h, q);
  if (!v) return std::nullopt;
  return v.tree;
}

}  // namespace

std::int64_t choice_count(MoveKind k, int n, int loops) {
  const std::int64_t m = n;
  switch (k) {
    case MoveKind::Grow: return n >= 2 ? 3 * m - 3 : 0;
    case MoveKind::Shrink: return n >= 4 ? 2 * m : 0;
    case MoveKind::RepairH:
    case MoveKind::RepairA: return choose(m, 2) + 4 * choose(m, 3);
    case MoveKind::Reroot: return 2 * m - 1;
    case MoveKind::TreeSwap: return n >= 4 ? (m - 3) * (m - 1) : 0;
    case MoveKind::EdgeSwap: return n >= 4 ? loops * (m - 1) : 0;
    case MoveKind::Pachner23: return n >= 4 ? 6 * (m - 2) : 0;
    case MoveKind::Pachner32: return n >= 5 ? m + loops - 1 : 0;
    case MoveKind::PillowIn: return n >= 4 ? 60 * (m - 2) : 0;
    case MoveKind::PillowOut: return n >= 6 ? loops + 1 : 0;
  }
  return 0;
}

std::optional<TripleTree> apply_move(MoveKind k, const TripleTree& tt, std::int64_t choice) {
  const int n = tt.n();
  if (choice < 0 || choice >= choice_count(k, n, tt.loops)) {
    throw Error(ErrorCode::InvalidArgument, "move choice out of range");
  }
  switch (k) {
    case MoveKind::Grow: {
      const auto sites = subdivision_choices(tt);
      if (choice >= static_cast<std::int64_t>(sites.size())) return std::nullopt;
      return validated(special_subdivide(tt, sites[choice]));
    }
    case MoveKind::Shrink: {
      const auto s = special_shrink(tt, static_cast<int>(choice));
      if (!s || !(special_subdivide(s->tree, s->choice) == tt)) return std::nullopt;
      // Only the first position undoing a given (parent, site) counts, so the
      // number of shrinks b -> a equals the number of grows a -> b.
      for (int p = 0; p < choice; ++p) {
        const auto earlier = special_shrink(tt, p);
        if (earlier && earlier->tree == s->tree && earlier->choice == s->choice) return std::nullopt;
      }
      return validated(s->tree);
    }
    case MoveKind::RepairH: return repair(tt, true, choice);
    case MoveKind::RepairA: return repair(tt, false, choice);
    case MoveKind::Reroot: return validated(rotate_root(tt, static_cast<int>(choice) + 1));
    default: break;
  }
  const Triangulation3D T = triple_to_triangulation(tt);
  const auto faces = internal_faces(T);
  switch (k) {
    case MoveKind::TreeSwap: {
      std::vector<std::array<int, 2>> in, out;
      for (auto f : faces) (T.in_tree(f[0], f[1]) ? in : out).push_back(f);
      const auto drop = choice / (n - 1), add = choice % (n - 1);
      if (drop >= static_cast<std::int64_t>(in.size()) || add >= static_cast<std::int64_t>(out.size())) {
        return std::nullopt;
      }
      in[drop] = out[add];
      Triangulation3D U = T;
      U.set_tree(in);
      return from_triangulation(U);
    }
    case MoveKind::EdgeSwap: {
      std::vector<int> in = T.edge_tree(), out;
      for (int c = 0; c < T.num_edges(); ++c) {
        if (!T.in_edge_tree(c)) out.push_back(c);
      }
      const auto drop = choice / (n - 1), add = choice % (n - 1);
      if (drop >= static_cast<std::int64_t>(in.size()) || add >= static_cast<std::int64_t>(out.size())) {
        return std::nullopt;
      }
      in[drop] = out[add];
      Triangulation3D U = T;
      U.set_edge_tree(in);
      return from_triangulation(U);
    }
    case MoveKind::Pachner23: {
      const auto f = faces[choice / 3];
      return from_triangulation(pachner_23(T, f[0], f[1], static_cast<int>(choice % 3)));
    }
    case MoveKind::Pachner32:
      if (choice >= T.num_edges()) return std::nullopt;
      return from_triangulation(pachner_32(T, static_cast<int>(choice)));
    case MoveKind::PillowIn: {
      const auto f = faces[choice / 30];
      const int rest = static_cast<int>(choice % 30);
      const int need = T.in_tree(f[0], f[1]) ? 3 : 2;
      const int mask = pillow_subsets()[need - 2][rest / 3];
      return from_triangulation(pillow_in(T, f[0], f[1], mask, rest % 3 + 1));
    }
    case MoveKind::PillowOut:
      if (choice >= T.num_vertices()) return std::nullopt;
      return from_triangulation(pillow_out(T, static_cast<int>(choice)));
    default: break;
  }
  return std::nullopt;
}


// --- chain -----------------------------------------------------------------

ChainState::ChainState(TripleTree tt) { replace(std::move(tt)); }

void ChainState::replace(TripleTree tt) {
  if (tt.loops != loop_count(tt.pi_h.partner(), tt.pi_a.partner())) {
    throw Error(ErrorCode::InvariantViolation, "cached loop count is stale");
  }
  tree_ = std::move(tt);
}

Proposal propose_move(const ChainState& s, std::mt19937_64& rng, const KindWeights& weights) {
  Proposal p;
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = std::uniform_real_distribution<double>(0, total)(rng);
  int k = 0;
  while (k < kMoveKinds - 1 && u >= weights[k]) u -= weights[k++];
  while (weights[k] == 0) --k;  // rounding at the top end
  p.kind = static_cast<MoveKind>(k);
  const std::int64_t forward = choice_count(p.kind, s.n(), s.loops());
  if (forward == 0) return p;
  p.choice = std::uniform_int_distribution<std::int64_t>(0, forward - 1)(rng);
  p.candidate = apply_move(p.kind, s.tree(), p.choice);
  if (!p.candidate) return p;
  const std::int64_t back = choice_count(reverse(p.kind), p.candidate->n(), p.candidate->loops);
  if (back == 0) {
    p.candidate.reset();
    return p;
  }
  p.log_ratio = std::log(static_cast<double>(forward)) - std::log(static_cast<double>(back));
  return p;
}

namespace {

std::uint64_t state_hash(const TripleTree& tt) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (char c : tt.t.word()) mix(static_cast<unsigned char>(c));
  for (int v : tt.pi_h.partner()) mix(static_cast<std::uint64_t>(v));
  for (int v : tt.pi_a.partner()) mix(static_cast<std::uint64_t>(v) << 20);
  return h;
}

// First triple tree of the smallest nonempty size in the window.
TripleTree seed_state(int n_min) {
  for (int n = n_min;; ++n) {
    if (n > 12) throw Error(ErrorCode::InvalidArgument, "no triple tree in the window");
    auto trees = enumerate_triple_trees(n);
    if (!trees.empty()) return trees.front();
  }
}

void check_config(const ChainConfig& c) {
  if (c.n_min < 2 || c.n_max < c.n_min || c.n_max > 1000) {
    throw Error(ErrorCode::InvalidArgument, "size window must satisfy 2 <= n_min <= n_max <= 1000");
  }
  if (!(c.x > 0) || (c.z && !(*c.z > 0))) throw Error(ErrorCode::InvalidArgument, "x and z must be positive");
  if (c.steps < 1 || c.tuning_steps < 0 || c.thinning < 0 || c.check_every < 0 || c.blocks < 2) {
    throw Error(ErrorCode::InvalidArgument, "bad step budget");
  }
  for (int k = 0; k < kMoveKinds; ++k) {
    const double w = c.kind_weights[k];
    if (!(w >= 0) || w != c.kind_weights[static_cast<int>(reverse(static_cast<MoveKind>(k)))]) {
      throw Error(ErrorCode::InvalidArgument, "kind weights must be nonnegative and equal on reverse pairs");
    }
  }
  if (std::accumulate(c.kind_weights.begin(), c.kind_weights.end(), 0.0) <= 0) {
    throw Error(ErrorCode::InvalidArgument, "some move kind needs a positive weight");
  }
  if (!c.log_f.empty() && static_cast<int>(c.log_f.size()) != c.n_max - c.n_min + 1) {
    throw Error(ErrorCode::InvalidArgument, "one weight per size in the window");
  }
}

struct Run {
  ChainResult result;
  std::vector<std::map<int, std::int64_t>> block_visits;  // per block, per size
  std::vector<std::unordered_set<std::uint64_t>> seen;    // per size in the window
};

class Chain {
 public:
  Chain(const ChainConfig& c, std::vector<double> log_f, std::uint64_t seed)
      : c_(c), log_f_(std::move(log_f)), rng_(seed), state_(seed_state(c.n_min)) {}

  double log_weight(int n, int loops) const {
    const double size = c_.z ? n * std::log(*c_.z) : log_f_[n - c_.n_min];
    return size + loops * std::log(c_.x);
  }

  // One Metropolis step; returns true when the move was accepted.
  bool step(std::array<MoveStats, kMoveKinds>* stats) {
    Proposal p = propose_move(state_, rng_, c_.kind_weights);
    auto& st = (*stats)[static_cast<int>(p.kind)];
    ++st.proposed;
    if (!p.candidate) return false;
    const int n = p.candidate->n();
    if (n < c_.n_min || n > c_.n_max) return false;
    ++st.valid;
    const double log_a =
        log_weight(n, p.candidate->loops) - log_weight(state_.n(), state_.loops()) + p.log_ratio;
    if (log_a < 0 && std::uniform_real_distribution<double>(0, 1)(rng_) >= std::exp(log_a)) return false;
    ++st.accepted;
    state_.replace(std::move(*p.candidate));
    return true;
  }

  void check() const {
    const auto& tt = state_.tree();
    if (!validate_triple(tt.t, tt.pi_h, tt.pi_a)) {
      throw Error(ErrorCode::InvariantViolation, "chain left the set of triple trees");
    }
  }

  const ChainState& state() const { return state_; }
  std::vector<double>& log_f() { return log_f_; }

 private:
  const ChainConfig& c_;
  std::vector<double> log_f_;
  std::mt19937_64 rng_;
  ChainState state_;
};

// Flat-histogram tuning: every visit lowers the weight of its size by the
// current modification factor. The factor halves whenever all sizes seen so
// far have at least 80% of the mean visit count, or each has at least
// 1/factor visits since the last halving. Once the halving schedule falls
// below (sizes seen)/t the factor follows that 1/t curve instead.
std::vector<double> tune(const ChainConfig& c, std::uint64_t seed) {
  const int sizes = c.n_max - c.n_min + 1;
  Chain chain(c, std::vector<double>(sizes, 0.0), seed);
  std::array<MoveStats, kMoveKinds> stats{};
  std::vector<std::int64_t> hist(sizes, 0);
  std::vector<char> ever(sizes, 0);
  int seen = 0;
  double mod = 0.1;  // weights across a window differ by tens; larger factors overshoot
  bool one_over_t = false;
  for (std::int64_t i = 1; i <= c.tuning_steps; ++i) {
    chain.step(&stats);
    const int k = chain.state().n() - c.n_min;
    if (!ever[k]) {
      // A newly reached size starts level with the lowest weight seen so far.
      double low = 0;
      bool first = true;
      for (int s = 0; s < sizes; ++s) {
        if (ever[s] && (first || chain.log_f()[s] < low)) low = chain.log_f()[s], first = false;
      }
      chain.log_f()[k] = low;
      ever[k] = 1;
      ++seen;
    }
    if (one_over_t) mod = static_cast<double>(seen) / static_cast<double>(i);
    chain.log_f()[k] -= mod;
    ++hist[k];
    if (!one_over_t && i % 1000 == 0) {
      std::int64_t total = 0, lowest = -1;
      for (int s = 0; s < sizes; ++s) {
        if (!ever[s]) continue;
        total += hist[s];
        if (lowest < 0 || hist[s] < lowest) lowest = hist[s];
      }
      const bool flat = lowest >= 0.8 * static_cast<double>(total) / seen;
      if (seen > 1 && (flat || static_cast<double>(lowest) * mod >= 1)) {
        mod /= 2;
        std::fill(hist.begin(), hist.end(), 0);
      }
      one_over_t = mod < static_cast<double>(seen) / static_cast<double>(i);
    }
  }
  auto& f = chain.log_f();
  double top = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < sizes; ++s) {
    if (ever[s]) top = std::max(top, f[s]);
  }
  for (int s = 0; s < sizes; ++s) f[s] = ever[s] ? f[s] - top : 0.0;
  return f;
}

// Integrated autocorrelation time by batch means.
double autocorrelation_time(const std::vector<double>& x) {
  const std::size_t len = x.size();
  if (len < 400) return 1;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(len);
  double var = 0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(len);
  if (var == 0) return 1;
  const std::size_t batches = 50, size = len / batches;
  double bvar = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    double m = 0;
    for (std::size_t i = b * size; i < (b + 1) * size; ++i) m += x[i];
    m /= static_cast<double>(size);
    bvar += (m - mean) * (m - mean);
  }
  bvar /= static_cast<double>(batches - 1);
  return std::max(0.5, static_cast<double>(size) * bvar / (2 * var));
}

Run production(const ChainConfig& c, const std::vector<double>& log_f, std::uint64_t seed) {
  Run run;
  auto& r = run.result;
  r.config = c;
  r.log_f = log_f;
  const auto start = std::chrono::steady_clock::now();
  Chain chain(c, log_f, seed);
  run.seen.resize(c.n_max - c.n_min + 1);
  run.block_visits.resize(c.blocks);
  std::vector<std::uint32_t> cells;
  cells.reserve(static_cast<std::size_t>(c.steps));
  std::map<std::pair<int, int>, std::uint32_t> cell_id;
  std::vector<std::pair<int, int>> cell_key;
  const std::int64_t block = std::max<std::int64_t>(1, c.steps / c.blocks);
  for (std::int64_t i = 0; i < c.steps; ++i) {
    if (chain.step(&r.moves)) run.seen[chain.state().n() - c.n_min].insert(state_hash(chain.state().tree()));
    if (c.check_every > 0 && i % c.check_every == 0) chain.check();
    const std::pair key{chain.state().n(), chain.state().loops()};
    ++r.visits[key];
    ++run.block_visits[std::min<std::int64_t>(i / block, c.blocks - 1)][key.first];
    auto [it, fresh] = cell_id.try_emplace(key, static_cast<std::uint32_t>(cell_key.size()));
    if (fresh) cell_key.push_back(key);
    cells.push_back(it->second);
  }
  run.seen[chain.state().n() - c.n_min].insert(state_hash(chain.state().tree()));

  // Thinning from the slowest cell indicator, size and loop count.
  double tau = 1;
  std::vector<double> series(cells.size());
  for (std::size_t id = 0; id < cell_key.size(); ++id) {
    for (std::size_t i = 0; i < cells.size(); ++i) series[i] = cells[i] == id ? 1.0 : 0.0;
    tau = std::max(tau, autocorrelation_time(series));
  }
  for (int which = 0; which < 2; ++which) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      series[i] = which == 0 ? cell_key[cells[i]].first : cell_key[cells[i]].second;
    }
    tau = std::max(tau, autocorrelation_time(series));
  }
  r.autocorrelation_time = tau;
  r.thinning = c.thinning > 0 ? c.thinning : std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(5 * tau)));
  for (std::size_t i = 0; i < cells.size(); i += static_cast<std::size_t>(r.thinning)) ++r.thinned[cell_key[cells[i]]];
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

// log M_n(x) up to a constant from per-size visit counts.
std::map<int, double> log_masses(const ChainConfig& c, const std::vector<double>& log_f,
                                 const std::map<int, std::int64_t>& visits) {
  std::map<int, double> out;
  for (auto [n, v] : visits) {
    if (v == 0) continue;
    const double size = c.z ? n * std::log(*c.z) : log_f[n - c.n_min];
    out[n] = std::log(static_cast<double>(v)) - size;
  }
  return out;
}

std::map<int, double> ratios_of(const std::map<int, double>& lm) {
  std::map<int, double> out;
  for (auto it = lm.begin(); it != lm.end(); ++it) {
    if (it == lm.begin()) continue;
    out[it->first] = std::exp(it->second - std::prev(it)->second);
  }
  return out;
}

// Inverse of the fitted geometric ratio over the top third of the window. When
// fewer than two sizes were reached up there, the top third of the sizes up to
// `steady` (the largest size every jackknife block visited), then of all
// visited sizes; the last fit has an infinite jackknife error.
struct ZFit {
  double z = 0;
  int lo = 0, hi = 0;
};
std::optional<ZFit> z_fit(const ChainConfig& c, const std::map<int, double>& lm, int steady) {
  if (lm.size() < 2) return std::nullopt;
  auto fit = [&](int lo, int hi) -> std::optional<ZFit> {
    double sn = 0, sy = 0, snn = 0, sny = 0;
    int k = 0;
    for (auto [n, y] : lm) {
      if (n < lo || n > hi) continue;
      sn += n, sy += y, snn += static_cast<double>(n) * n, sny += n * y;
      ++k;
    }
    if (k < 2) return std::nullopt;
    const double slope = (k * sny - sn * sy) / (k * snn - sn * sn);
    return ZFit{std::exp(-slope), lo, hi};
  };
  if (auto z = fit(c.n_max - (c.n_max - c.n_min) / 3, c.n_max)) return z;
  const int bottom = lm.begin()->first, top = lm.rbegin()->first;
  if (auto z = fit(steady - (steady - bottom) / 3, steady)) return z;
  return fit(top - (top - bottom) / 3, top);
}

void estimate(Run& run) {
  auto& r = run.result;
  const auto& c = r.config;
  std::map<int, std::int64_t> total;
  for (const auto& b : run.block_visits) {
    for (auto [n, v] : b) total[n] += v;
  }
  r.log_m = log_masses(c, r.log_f, total);
  const auto full = ratios_of(r.log_m);
  int steady = c.n_min;
  for (auto [n, v] : total) {
    const bool everywhere = std::all_of(run.block_visits.begin(), run.block_visits.end(), [n = n](const auto& b) {
      const auto it = b.find(n);
      return it != b.end() && it->second > 0;
    });
    if (everywhere) steady = std::max(steady, n);
  }
  const auto z_full = z_fit(c, r.log_m, steady);
  // Jackknife over blocks.
  const int B = static_cast<int>(run.block_visits.size());
  std::map<int, std::vector<double>> ratio_jk;
  std::vector<double> z_jk;
  for (int b = 0; b < B; ++b) {
    auto rest = total;
    for (auto [n, v] : run.block_visits[b]) rest[n] -= v;
    const auto lm = log_masses(c, r.log_f, rest);
    for (auto [n, v] : ratios_of(lm)) ratio_jk[n].push_back(v);
    if (auto z = z_fit(c, lm, steady); z && z_full && z->lo == z_full->lo) z_jk.push_back(z->z);
  }
  auto jackknife = [&](double value, const std::vector<double>& xs) {
    if (static_cast<int>(xs.size()) != B) return Estimate{value, std::numeric_limits<double>::infinity()};
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / B;
    double s = 0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return Estimate{value, std::sqrt(s * (B - 1) / B)};
  };
  r.ratio.clear();
  for (auto [n, v] : full) r.ratio[n] = jackknife(v, ratio_jk[n]);
  if (z_full) {
    r.z_star = jackknife(z_full->z, z_jk);
    r.z_range = {z_full->lo, z_full->hi};
  }
  r.distinct.clear();
  for (std::size_t k = 0; k < run.seen.size(); ++k) {
    if (!run.seen[k].empty()) r.distinct[c.n_min + static_cast<int>(k)] = static_cast<std::int64_t>(run.seen[k].size());
  }
}

std::vector<double> weights_for(const ChainConfig& c) {
  if (c.z) return {};
  if (!c.log_f.empty()) return c.log_f;
  return tune(c, c.seed ^ 0x5bd1e995u);
}

std::uint64_t derived_seed(std::uint64_t seed, int i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

ChainResult run_chain(const ChainConfig& config) {
  check_config(config);
  const auto start = std::chrono::steady_clock::now();
  Run run = production(config, weights_for(config), config.seed);
  estimate(run);
  run.result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run.result;
}

ChainResult run_chains(const ChainConfig& config, int chains, int jobs) {
  check_config(config);
  if (chains < 1 || jobs < 1) throw Error(ErrorCode::InvalidArgument, "chains and jobs must be positive");
  const auto start = std::chrono::steady_clock::now();
  const auto log_f = weights_for(config);
  std::vector<Run> runs(chains);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < chains; i = next++) runs[i] = production(config, log_f, derived_seed(config.seed, i));
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < std::min(jobs, chains); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  Run merged;
  auto& m = merged.result;
  m.config = config;
  m.log_f = log_f;
  merged.seen.resize(config.n_max - config.n_min + 1);
  for (auto& run : runs) {
    const auto& r = run.result;
    for (auto [k, v] : r.visits) m.visits[k] += v;
    for (auto [k, v] : r.thinned) m.thinned[k] += v;
    for (int i = 0; i < kMoveKinds; ++i) {
      m.moves[i].proposed += r.moves[i].proposed;
      m.moves[i].valid += r.moves[i].valid;
      m.moves[i].accepted += r.moves[i].accepted;
    }
    m.thinning = std::max(m.thinning, r.thinning);
    m.autocorrelation_time = std::max(m.autocorrelation_time, r.autocorrelation_time);
    for (auto& b : run.block_visits) merged.block_visits.push_back(std::move(b));
    for (std::size_t k = 0; k < run.seen.size(); ++k) merged.seen[k].insert(run.seen[k].begin(), run.seen[k].end());
  }
  estimate(merged);
  m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return m;
}

ChiSquare chi_square(const ChainResult& r, const std::map<std::pair<int, int>, double>& exact) {
  const auto& c = r.config;
  std::vector<std::pair<double, double>> cells;  // (log expected weight, observed)
  double top = -std::numeric_limits<double>::infinity(), total = 0;
  for (auto [key, m] : exact) {
    const auto [n, loops] = key;
    if (n < c.n_min || n > c.n_max || m <= 0) continue;
    const double size = c.z ? n * std::log(*c.z) : r.log_f[n - c.n_min];
    const double lw = size + loops * std::log(c.x) + std::log(m);
    const auto it = r.thinned.find(key);
    const double obs = it == r.thinned.end() ? 0.0 : static_cast<double>(it->second);
    cells.emplace_back(lw, obs);
    top = std::max(top, lw);
    total += obs;
  }
  double wsum = 0;
  for (auto& [w, obs] : cells) wsum += (w = std::exp(w - top));
  // Cells expecting fewer than five samples are pooled.
  ChiSquare out;
  double pool_e = 0, pool_o = 0;
  int used = 0;
  for (auto [w, obs] : cells) {
    const double e = total * w / wsum;
    if (e < 5) {
      pool_e += e, pool_o += obs;
      continue;
    }
    out.statistic += (obs - e) * (obs - e) / e;
    ++used;
  }
  if (pool_e > 0) {
    out.statistic += (pool_o - pool_e) * (pool_o - pool_e) / pool_e;
    ++used;
  }
  out.dof = used - 1;
  if (out.dof > 0 && std::isfinite(out.statistic)) {
    boost::math::chi_squared dist(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  }
  return out;
}

std::map<std::pair<int, int>, double> exact_table(int n_min, int n_max, int jobs) {
  EnumerationOptions opts;
  opts.jobs = jobs;
  std::map<std::pair<int, int>, double> out;
  for (int n = n_min; n <= n_max; ++n) {
    for (const auto& [loops, m] : enumerate_Mn(n, opts).m.slice(n)) {
      if (m != 0) out[{n, loops}] = m.get_d();
    }
  }
  return out;
}

std::map<int, double> exact_ratios(const std::map<std::pair<int, int>, double>& table, double x) {
  std::map<int, double> mass;
  for (const auto& [cell, m] : table) mass[cell.first] += m * std::pow(x, cell.second);
  std::map<int, double> out;
  for (auto it = mass.begin(); it != mass.end(); ++it) {
    if (it != mass.begin()) out[it->first] = it->second / std::prev(it)->second;
  }
  return out;
}

}  // namespace ttlab
