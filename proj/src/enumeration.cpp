#include "ttlab/enumeration.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <thread>
#include <tuple>

#include "ttlab/meander.hpp"

namespace ttlab {

PairingTable::PairingTable(int n) : n_(n), pairings_(enumerate_pairings(n)) {
  const int m = 2 * n;
  const int count = size();
  // Any triangulation of the polygon works for the classes: gluing only
  // touches boundary edges, so boundary vertex classes depend on pi alone.
  const auto t = OuterplanarTriangulation::from_word(n, std::string(m - 2, '(') + std::string(m - 2, ')'));
  classes_.resize(static_cast<std::size_t>(count) * m);
  for (int p = 0; p < count; ++p) {
    const Triangulation2D g = glue(t, pairings_[p].partner());
    std::vector<int> cls(m, -1);
    for (int i = 0; i < m; ++i) cls[i] = g.vertex(tail_corner(t.boundary_slot(i)));
    // Densify in vertex order so the table is independent of t.
    std::vector<int> dense(g.num_vertices(), -1);
    int next = 0;
    for (int v = 0; v < m; ++v) {
      if (dense[cls[v]] < 0) dense[cls[v]] = next++;
      classes_[p * m + v] = dense[cls[v]];
    }
  }
  loops_.resize(static_cast<std::size_t>(count) * count);
  for (int p = 0; p < count; ++p) {
    for (int q = 0; q < count; ++q) {
      loops_[p * count + q] = static_cast<std::uint8_t>(loop_count(pairings_[p].partner(), pairings_[q].partner()));
    }
  }
}

int PairingTable::index_of(const NonCrossingPairing& p) const {
  auto it = std::lower_bound(pairings_.begin(), pairings_.end(), p);
  if (it == pairings_.end() || *it != p) throw Error(ErrorCode::InvalidArgument, "pairing not in table");
  return static_cast<int>(it - pairings_.begin());
}

RejectionCounts& RejectionCounts::operator+=(const RejectionCounts& o) {
  for (const auto& [k, v] : o.hierarchical) hierarchical[k] += v;
  for (const auto& [k, v] : o.apollonian) apollonian[k] += v;
  return *this;
}

Candidates candidates(const OuterplanarTriangulation& t, const PairingTable& table, RejectionCounts* counts) {
  const int n = t.n();
  if (table.n() != n) throw Error(ErrorCode::SizeMismatch, "pairing table size differs from t");
  const int m = 2 * n;
  const int faces = t.num_triangles();
  std::vector<int> bface(m);
  for (int i = 0; i < m; ++i) bface[i] = Triangulation2D::face(t.boundary_slot(i));

  Candidates out;
  std::vector<std::array<int, 3>> oriented(faces);
  std::vector<int> key(faces), sorted(faces);
  for (int p = 0; p < table.size(); ++p) {
    bool loop = false;
    for (int f = 0; f < faces && !loop; ++f) {
      const auto& tri = t.triangle(f);
      std::array<int, 3> c{table.vertex_class(p, tri[0]), table.vertex_class(p, tri[1]),
                           table.vertex_class(p, tri[2])};
      if (c[0] == c[1] || c[1] == c[2] || c[0] == c[2]) loop = true;
      oriented[f] = c;
      std::sort(c.begin(), c.end());
      key[f] = (c[0] * 64 + c[1]) * 64 + c[2];
    }
    if (loop) {
      if (counts) {
        ++counts->hierarchical[Rejection::NotHierarchical];
        ++counts->apollonian[Rejection::NotApollonian];
      }
      continue;
    }
    sorted = key;
    std::sort(sorted.begin(), sorted.end());
    bool paired = true;
    for (int f = 0; f + 1 < faces && paired; f += 2) {
      if (sorted[f] != sorted[f + 1] || (f + 2 < faces && sorted[f + 1] == sorted[f + 2])) paired = false;
    }
    if (faces % 2 != 0) paired = false;
    if (!paired) {
      if (counts) ++counts->hierarchical[Rejection::NotHierarchical];
    } else {
      const auto& pi = table.pairing(p);
      bool tree_ok = true;
      for (int i = 0; i < m && tree_ok; ++i) {
        const int a = bface[i], b = bface[pi[i]];
        if (a == b || key[a] != key[b]) tree_ok = false;
      }
      if (tree_ok) {
        out.h.push_back(p);
      } else if (counts) {
        ++counts->hierarchical[Rejection::TreeEdgeIn2Cycle];
      }
    }
    // Stacked spheres with at least four vertices are simplicial.
    bool simplicial = true;
    if (n >= 3) {
      for (int f = 0; f + 1 < faces && simplicial; ++f) simplicial = sorted[f] != sorted[f + 1];
    }
    if (simplicial && peel_stacked(oriented, n + 1)) {
      out.a.push_back(p);
    } else if (counts) {
      ++counts->apollonian[Rejection::NotApollonian];
    }
  }
  return out;
}

namespace {

void check_size(int n, const EnumerationOptions& opts) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "size must be at least 2");
  const int cap = opts.extended ? std::max(opts.max_n, 8) : opts.max_n;
  if (n > cap) throw Error(ErrorCode::Cap, "size " + std::to_string(n) + " exceeds the enumeration cap " +
                                               std::to_string(cap));
}

struct Partial {
  std::vector<std::int64_t> by_loops;
  std::int64_t outerplanar = 0, h = 0, a = 0;
  std::map<std::pair<int, int>, std::int64_t> histogram;
  RejectionCounts rejections;
};

}  // namespace

EnumerationReport enumerate_Mn(int n, const EnumerationOptions& opts) {
  check_size(n, opts);
  const auto start = std::chrono::steady_clock::now();
  const PairingTable table(n);
  const int jobs = std::max(1, opts.jobs);
  const std::int64_t total = catalan(2 * n - 2).get_si();
  std::vector<Partial> parts(jobs);
  std::mutex progress_mutex;
  std::int64_t done = 0;

  auto work = [&](int w) {
    Partial& part = parts[w];
    part.by_loops.assign(n + 2, 0);
    const int nodes = 2 * n - 2;
    std::string word = std::string(nodes, '(') + std::string(nodes, ')');
    std::int64_t index = 0;
    do {
      if (index++ % jobs != w) continue;
      const auto t = OuterplanarTriangulation::from_word(n, word);
      const Candidates c = candidates(t, table, &part.rejections);
      ++part.outerplanar;
      part.h += static_cast<std::int64_t>(c.h.size());
      part.a += static_cast<std::int64_t>(c.a.size());
      ++part.histogram[{static_cast<int>(c.h.size()), static_cast<int>(c.a.size())}];
      for (int h : c.h) {
        for (int a : c.a) ++part.by_loops[table.loops(h, a)];
      }
      if (opts.progress && part.outerplanar % 4096 == 0) {
        std::lock_guard lock(progress_mutex);
        done += 4096;
        opts.progress(done, total);
      }
    } while (next_dyck_word(word));
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < jobs; ++w) threads.emplace_back(work, w);
  }

  EnumerationReport r;
  r.n = n;
  for (const Partial& part : parts) {
    for (int loops = 0; loops < static_cast<int>(part.by_loops.size()); ++loops) {
      if (part.by_loops[loops] != 0) r.m.add(n, loops, mpz_class(static_cast<long>(part.by_loops[loops])));
    }
    r.outerplanar += part.outerplanar;
    r.h_candidates += part.h;
    r.a_candidates += part.a;
    for (const auto& [k, v] : part.histogram) r.candidate_histogram[k] += v;
    r.rejections += part.rejections;
  }
  if (opts.progress) opts.progress(total, total);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

void for_each_triple_tree(int n, const std::function<void(const TripleTree&)>& fn) {
  const PairingTable table(n);
  for_each_outerplanar(n, [&](const OuterplanarTriangulation& t) {
    const Candidates c = candidates(t, table);
    for (int h : c.h) {
      for (int a : c.a) fn(TripleTree{t, table.pairing(h), table.pairing(a), table.loops(h, a)});
    }
  });
}

std::vector<TripleTree> enumerate_triple_trees(int n) {
  std::vector<TripleTree> out;
  for_each_triple_tree(n, [&](const TripleTree& tt) { out.push_back(tt); });
  return out;
}

mpz_class hierarchical_count(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "size must be at least 2");
  mpz_class p3;
  mpz_ui_pow_ui(p3.get_mpz_t(), 3, n - 2);
  return 2 * p3 * catalan(n - 2);
}

TruncatedSeries h_series(int order) {
  const auto z = TruncatedSeries::variable(order);
  const auto one = TruncatedSeries::constant(order, 1);
  return (one - (one - z * mpq_class(12)).sqrt()) * mpq_class(1, 3);
}

TruncatedSeries h_system_series(int order) {
  const auto z = TruncatedSeries::variable(order);
  const auto one = TruncatedSeries::constant(order, 1);
  TruncatedSeries h1(order), h2 = one;
  // Each pass fixes one more coefficient.
  for (int k = 0; k <= order; ++k) {
    const auto next1 = z * (h2 + mpq_class(4) * h1 * h2 + mpq_class(3) * h1 * h1 * h2);
    const auto next2 = one + mpq_class(2) * z * h2 * h2 * (one + h1);
    h1 = next1;
    h2 = next2;
  }
  return mpq_class(2) * z * h2 * (one + h1);
}

ApollonianSeries apollonian_series(int order) {
  const auto z = TruncatedSeries::variable(order);
  const auto one = TruncatedSeries::constant(order, 1);
  TruncatedSeries a1(order), a2(order), a3 = one;
  for (int k = 0; k <= order; ++k) {
    const auto a3sq = a3 * a3;
    const auto a3cu = a3sq * a3;
    const auto n1 = z * (a3cu + mpq_class(12) * a2 * a3sq + mpq_class(3) * a1 * a3sq +
                         mpq_class(36) * a2 * a2 * a3 + mpq_class(14) * a2.pow(3) + mpq_class(12) * a1 * a2 * a3);
    const auto n2 = z * (a3cu + mpq_class(7) * a2 * a3sq + mpq_class(7) * a2 * a2 * a3 + a1 * a3sq);
    const auto n3 = one + z * (mpq_class(3) * a3cu + mpq_class(6) * a2 * a3sq);
    a1 = n1;
    a2 = n2;
    a3 = n3;
  }
  const auto z2 = z * z;
  return {a1, a2, a3, mpq_class(2) * z2 * a2 + mpq_class(2) * z2 * a3};
}

TruncatedSeries apollonian_relation_residual(const TruncatedSeries& a3) {
  const int order = a3.order();
  const auto z = TruncatedSeries::variable(order);
  const auto p2 = a3 * a3, p3 = p2 * a3, p4 = p3 * a3, p6 = p3 * p3;
  return mpq_class(81) * z * z * p6 - mpq_class(54) * z * p4 + mpq_class(108) * z * p3 + mpq_class(4) * p3 +
         mpq_class(9) * p2 - mpq_class(48) * a3 + TruncatedSeries::constant(order, 35);
}

double apollonian_growth_constant(double tolerance) {
  static const long coeffs[] = {1296L, 363232L, -16927248L, 438097032L, -8977010004L, 28680825384L, -24111675L};
  auto eval = [](const mpq_class& c) {
    mpq_class v = 0;
    for (long k : coeffs) v = v * c + mpq_class(mpz_class(std::to_string(k)));
    return v;
  };
  mpq_class lo = 28, hi = 29;
  const int s_lo = sgn(eval(lo));
  if (s_lo == 0) return 28.0;
  if (s_lo == sgn(eval(hi))) throw Error(ErrorCode::InvariantViolation, "no sign change on the bracket");
  while (mpq_class(hi - lo).get_d() > tolerance) {
    mpq_class mid = (lo + hi) / 2;
    const int s = sgn(eval(mid));
    if (s == 0) return mid.get_d();
    (s == s_lo ? lo : hi) = mid;
  }
  return mpq_class((lo + hi) / 2).get_d();
}

mpz_class special_class_count(int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "k must be nonnegative");
  mpz_class p3;
  mpz_ui_pow_ui(p3.get_mpz_t(), 3, k);
  const mpz_class num = p3 * (2 * k + 2) * binomial(3 * k + 1, k);
  if (num % (3 * k + 1) != 0) throw Error(ErrorCode::InvariantViolation, "special count is not integral");
  return num / (3 * k + 1);
}

BoundsReport bounds_report(const EnumerationReport& r) {
  BoundsReport b;
  b.n = r.n;
  b.total = r.total();
  b.upper = hierarchical_count(r.n) * catalan(r.n);
  b.upper_ok = b.total <= b.upper;
  if (r.n % 2 == 0) {
    const int k = (r.n - 2) / 2;
    b.k = k;
    b.top_coefficient = r.m.coefficient(r.n, k + 2);
    b.special = special_class_count(k);
    b.lower_ok = b.top_coefficient >= b.special;
  }
  return b;
}

TripleTree rotate_root(const TripleTree& tt, int shift) {
  const int m = tt.t.boundary_size();
  shift = ((shift % m) + m) % m;
  auto move = [&](int v) { return (v - shift + m) % m; };
  std::vector<std::array<int, 3>> tris;
  for (auto tri : tt.t.triangles()) {
    for (int& v : tri) v = move(v);
    std::sort(tri.begin(), tri.end());
    tris.push_back(tri);
  }
  std::vector<int> ph(m), pa(m);
  for (int i = 0; i < m; ++i) {
    ph[move(i)] = move(tt.pi_h[i]);
    pa[move(i)] = move(tt.pi_a[i]);
  }
  return TripleTree{OuterplanarTriangulation::from_triangles(tt.n(), tris), NonCrossingPairing(ph),
                    NonCrossingPairing(pa), tt.loops};
}

// --- special subdivision -------------------------------------------------

namespace {

struct HierarchicalView {
  Triangulation2D h;
  TrianglePairing companions;
};

HierarchicalView hierarchical_view(const TripleTree& tt) {
  HierarchicalView v{glue(tt.t, tt.pi_h.partner()), {}};
  auto cp = companion_pairing(v.h);
  if (!cp) throw Error(ErrorCode::NotHierarchical, "hierarchical gluing has no companion pairing");
  v.companions = std::move(*cp);
  return v;
}

int corner_with_class(const Triangulation2D& h, int face, int cls) {
  for (int c = 0; c < 3; ++c) {
    if (h.vertex(3 * face + c) == cls) return c;
  }
  throw Error(ErrorCode::InvariantViolation, "companion lacks the shared vertex class");
}

// A cut of the fan at vertex p along the edge to the neighbour at offset r
// (clockwise distance from p). side 0: the owning triangle precedes the cut.
struct FanCut {
  int r;
  int side;
  int owner;  // 0 for the chosen triangle, 1 for its companion
  friend auto operator<=>(const FanCut&, const FanCut&) = default;
};

}  // namespace

std::vector<SubdivisionChoice> subdivision_choices(const TripleTree& tt) {
  const auto view = hierarchical_view(tt);
  std::vector<SubdivisionChoice> out;
  for (int f = 0; f < tt.t.num_triangles(); ++f) {
    if (f < view.companions.partner[f]) {
      for (int c = 0; c < 3; ++c) out.push_back({f, c});
    }
  }
  return out;
}

TripleTree special_subdivide(const TripleTree& tt, SubdivisionChoice choice) {
  const auto& t = tt.t;
  const int n = t.n(), m = 2 * n;
  if (choice.triangle < 0 || choice.triangle >= t.num_triangles() || choice.corner < 0 || choice.corner > 2) {
    throw Error(ErrorCode::InvalidArgument, "subdivision choice out of range");
  }
  const auto view = hierarchical_view(tt);
  const std::array<int, 2> owner_face{choice.triangle, view.companions.partner[choice.triangle]};
  const int cls = view.h.vertex(3 * choice.triangle + choice.corner);
  const std::array<int, 2> owner_corner{choice.corner, corner_with_class(view.h, owner_face[1], cls)};

  auto offset = [&](int p, int v) { return (v - p + m) % m; };
  std::vector<std::vector<FanCut>> cuts(m);
  for (int o = 0; o < 2; ++o) {
    const auto& tri = t.triangle(owner_face[o]);
    const int p = tri[owner_corner[o]];
    const int x = tri[(owner_corner[o] + 1) % 3], y = tri[(owner_corner[o] + 2) % 3];
    const int lo = std::min(offset(p, x), offset(p, y)), hi = std::max(offset(p, x), offset(p, y));
    cuts[p].push_back({lo, 1, o});
    cuts[p].push_back({hi, 0, o});
  }
  for (auto& c : cuts) std::sort(c.begin(), c.end());

  // Copy of p used by a fan triangle spanning offsets (lo, hi).
  auto copy_of = [&](int p, int lo) {
    int k = 0;
    for (const FanCut& c : cuts[p]) k += c.r <= lo;
    return k;
  };
  // New boundary labels: old vertices in order, copies of each from the
  // highest index down, rotated so that copy 0 of vertex 0 is label 0.
  std::vector<std::vector<int>> label(m);
  int next = 0;
  for (int q = 0; q < m; ++q) {
    const int k = static_cast<int>(cuts[q].size());
    label[q].assign(k + 1, 0);
    for (int c = k; c >= 0; --c) label[q][c] = next++;
  }
  const int m2 = next;
  const int shift = static_cast<int>(cuts[0].size());
  for (auto& ls : label) {
    for (int& l : ls) l = (l - shift + m2) % m2;
  }

  std::vector<std::array<int, 3>> tris;
  std::vector<std::array<int, 3>> relabeled(t.num_triangles());
  for (int f = 0; f < t.num_triangles(); ++f) {
    const auto& tri = t.triangle(f);
    for (int c = 0; c < 3; ++c) {
      const int p = tri[c];
      const int a = offset(p, tri[(c + 1) % 3]), b = offset(p, tri[(c + 2) % 3]);
      relabeled[f][c] = label[p][copy_of(p, std::min(a, b))];
    }
    tris.push_back(relabeled[f]);
  }
  // Each insert adds a boundary edge from copy i+1 to copy i of the cut vertex.
  std::array<std::vector<int>, 2> site_edges;
  for (int p = 0; p < m; ++p) {
    for (int i = 0; i < static_cast<int>(cuts[p].size()); ++i) {
      const FanCut& c = cuts[p][i];
      const int u = (p + c.r) % m;
      const auto& owner = t.triangle(owner_face[c.owner]);
      int apex = -1;
      for (int k = 0; k < 3; ++k) {
        if (owner[k] == u) apex = relabeled[owner_face[c.owner]][k];
      }
      tris.push_back({label[p][i], apex, label[p][i + 1]});
      site_edges[c.owner].push_back(label[p][i + 1]);
    }
  }

  const int n2 = m2 / 2;
  std::vector<int> ph(m2, -1), pa(m2, -1);
  for (int i = 0; i < m; ++i) {
    const int e = label[i][0];
    ph[e] = label[tt.pi_h[i]][0];
    pa[e] = label[tt.pi_a[i]][0];
  }
  for (auto& s : site_edges) std::sort(s.begin(), s.end());
  if (site_edges[1][0] < site_edges[0][0]) std::swap(site_edges[0], site_edges[1]);
  const auto& a = site_edges[0];
  const auto& b = site_edges[1];
  pa[a[0]] = a[1], pa[a[1]] = a[0];
  pa[b[0]] = b[1], pa[b[1]] = b[0];
  ph[a[1]] = b[0], ph[b[0]] = a[1];
  ph[a[0]] = b[1], ph[b[1]] = a[0];

  for (auto& tri : tris) std::sort(tri.begin(), tri.end());
  auto grown = OuterplanarTriangulation::from_triangles(n2, tris);
  return make_triple(grown, NonCrossingPairing(ph), NonCrossingPairing(pa));
}

std::optional<Shrink> special_shrink(const TripleTree& tt, int position) {
  const auto& t = tt.t;
  const int m = t.boundary_size();
  if (t.n() < 4 || position < 0 || position >= m) return std::nullopt;
  const int x1 = position, x2 = (x1 + 1) % m;
  if (tt.pi_a[x1] != x2) return std::nullopt;
  const int y1 = tt.pi_h[x2], y2 = (y1 + 1) % m;
  if (tt.pi_a[y1] != y2 || tt.pi_h[x1] != y2) return std::nullopt;
  const std::array<int, 4> edges{x1, x2, y1, y2};
  if (std::find(edges.begin(), edges.end(), 0) != edges.end()) return std::nullopt;

  std::vector<char> dropped(t.num_triangles(), 0);
  for (int e : edges) dropped[Triangulation2D::face(t.boundary_slot(e))] = 1;
  if (std::count(dropped.begin(), dropped.end(), 1) != 4) return std::nullopt;
  // The middle vertex of each site sees exactly its two inserts and one more face.
  std::array<int, 2> middle{-1, -1};
  for (int s = 0; s < 2; ++s) {
    const int v = s == 0 ? x2 : y2;
    int seen = 0;
    for (int f = 0; f < t.num_triangles(); ++f) {
      const auto& tri = t.triangle(f);
      if (std::find(tri.begin(), tri.end(), v) == tri.end()) continue;
      ++seen;
      if (!dropped[f]) middle[s] = f;
    }
    if (seen != 3 || middle[s] < 0) return std::nullopt;
  }

  std::vector<char> removed(m, 0);
  removed[x1] = removed[x2] = removed[y1] = removed[y2] = 1;
  std::vector<int> rank(m, -1);
  int kept = 0;
  for (int v = 0; v < m; ++v) {
    if (!removed[v]) rank[v] = kept++;
  }
  auto rep = [&](int v) {
    while (removed[v]) v = (v + 1) % m;
    return rank[v];
  };
  const int n2 = kept / 2;
  if (kept != m - 4) return std::nullopt;

  std::vector<std::array<int, 3>> tris;
  std::vector<int> image(t.num_triangles(), -1);
  for (int f = 0; f < t.num_triangles(); ++f) {
    if (dropped[f]) continue;
    std::array<int, 3> tri{rep(t.triangle(f)[0]), rep(t.triangle(f)[1]), rep(t.triangle(f)[2])};
    std::sort(tri.begin(), tri.end());
    if (tri[0] == tri[1] || tri[1] == tri[2]) return std::nullopt;
    image[f] = static_cast<int>(tris.size());
    tris.push_back(tri);
  }
  std::vector<int> ph(kept, -1), pa(kept, -1);
  for (int i = 0; i < m; ++i) {
    if (removed[i]) continue;
    if (removed[tt.pi_h[i]] || removed[tt.pi_a[i]]) return std::nullopt;
    ph[rank[i]] = rank[tt.pi_h[i]];
    pa[rank[i]] = rank[tt.pi_a[i]];
  }
  Shrink out;
  try {
    const auto small = OuterplanarTriangulation::from_triangles(n2, tris);
    auto v = validate_triple(small, NonCrossingPairing(ph), NonCrossingPairing(pa));
    if (!v) return std::nullopt;
    out.tree = std::move(*v.tree);
  } catch (const Error&) {
    return std::nullopt;
  }
  // Locate the middle face of the first site in the shrunk t.
  const auto& key = tris[image[middle[0]]];
  int face = -1;
  for (int f = 0; f < out.tree.t.num_triangles(); ++f) {
    if (out.tree.t.triangle(f) == key) face = f;
  }
  const int merged = rep(x2);
  const int corner = static_cast<int>(std::find(key.begin(), key.end(), merged) - key.begin());
  if (face < 0 || corner > 2) return std::nullopt;
  const auto view = hierarchical_view(out.tree);
  const int partner = view.companions.partner[face];
  out.choice = {face, corner};
  if (partner < face) {
    out.choice = {partner, corner_with_class(view.h, partner, view.h.vertex(3 * face + corner))};
  }
  try {
    if (!(special_subdivide(out.tree, out.choice) == tt)) return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

namespace {

auto triple_key(const TripleTree& tt) {
  return std::make_tuple(tt.t.word(), tt.pi_h, tt.pi_a);
}

}  // namespace

std::vector<TripleTree> special_class(int k) {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "k must be nonnegative");
  std::vector<TripleTree> level = enumerate_triple_trees(2);
  for (int step = 0;; ++step) {
    std::map<decltype(triple_key(level[0])), TripleTree> closed;
    for (const auto& tt : level) {
      for (int s = 0; s < tt.t.boundary_size(); ++s) {
        auto r = rotate_root(tt, s);
        closed.emplace(triple_key(r), std::move(r));
      }
    }
    level.clear();
    if (step == k) {
      for (auto& [key, tt] : closed) level.push_back(std::move(tt));
      return level;
    }
    std::map<decltype(triple_key(closed.begin()->second)), TripleTree> grown;
    for (const auto& [key, tt] : closed) {
      for (auto c : subdivision_choices(tt)) {
        auto g = special_subdivide(tt, c);
        grown.emplace(triple_key(g), std::move(g));
      }
    }
    for (auto& [key, tt] : grown) level.push_back(std::move(tt));
  }
}

}  // namespace ttlab
