#include "ttlab/planar_maps.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ttlab/meander.hpp"

namespace ttlab {

std::vector<int> rotation_vertex_classes(std::span<const int> twin) {
  DisjointSets ds(twin.size());
  for (int d = 0; d < static_cast<int>(twin.size()); ++d) {
    const int u = twin[d];
    ds.unite(tail_corner(d), head_corner(u));
    ds.unite(head_corner(d), tail_corner(u));
  }
  return ds.labels();
}

namespace {

void check_twins(std::span<const int> twin) {
  if (twin.size() % 3 != 0) throw Error(ErrorCode::InvalidArgument, "dart count is not a multiple of 3");
  if (!is_involution(twin)) throw Error(ErrorCode::InvalidArgument, "twin is not a fixed-point-free involution");
}

int count_distinct(const std::vector<int>& labels) {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

}  // namespace

Triangulation2D::Triangulation2D(std::vector<int> twin) : twin_(std::move(twin)) {
  check_twins(twin_);
  corner_vertex_ = rotation_vertex_classes(twin_);
  num_vertices_ = count_distinct(corner_vertex_);
}

Triangulation2D::Triangulation2D(std::vector<int> twin, std::vector<int> corner_vertex)
    : twin_(std::move(twin)) {
  check_twins(twin_);
  if (corner_vertex.size() != twin_.size()) {
    throw Error(ErrorCode::SizeMismatch, "one vertex label per corner expected");
  }
  // Relabel to first appearance; the partition must match the rotation system.
  std::map<int, int> dense;
  corner_vertex_.resize(corner_vertex.size());
  for (std::size_t c = 0; c < corner_vertex.size(); ++c) {
    auto [it, fresh] = dense.emplace(corner_vertex[c], static_cast<int>(dense.size()));
    corner_vertex_[c] = it->second;
  }
  if (corner_vertex_ != rotation_vertex_classes(twin_)) {
    throw Error(ErrorCode::InvariantViolation, "vertex classes disagree with the dart rotation");
  }
  num_vertices_ = static_cast<int>(dense.size());
}

bool Triangulation2D::is_connected() const {
  if (num_faces() == 0) return true;
  DisjointSets ds(num_faces());
  for (int d = 0; d < num_darts(); ++d) ds.unite(face(d), face(twin_[d]));
  return ds.components() == 1;
}

void Triangulation2D::set_distinguished(std::span<const int> darts) {
  e0_.assign(twin_.size(), 0);
  for (int d : darts) {
    e0_.at(d) = 1;
    e0_[twin_[d]] = 1;
  }
}

std::vector<int> Triangulation2D::distinguished_darts() const {
  std::vector<int> out;
  for (int d = 0; d < num_darts(); ++d) {
    if (distinguished(d)) out.push_back(d);
  }
  return out;
}

void Triangulation2D::set_root(int d) {
  if (d < 0 || d >= num_darts()) throw Error(ErrorCode::InvalidArgument, "root dart out of range");
  root_ = d;
}

std::string Triangulation2D::dart_csv() const {
  std::ostringstream os;
  os << "# ttlab/1 darts\ndart,twin,next,vertex\n";
  for (int d = 0; d < num_darts(); ++d) {
    os << d << ',' << twin_[d] << ',' << next(d) << ',' << origin(d) << '\n';
  }
  return os.str();
}

Triangulation2D glue(const OuterplanarTriangulation& t, std::span<const int> pi) {
  const int m = t.boundary_size();
  if (static_cast<int>(pi.size()) != m) throw Error(ErrorCode::SizeMismatch, "pairing size differs from boundary");
  if (!is_involution(pi)) throw Error(ErrorCode::InvalidArgument, "gluing pairing is not an involution");

  const int darts = 3 * t.num_triangles();
  std::vector<int> twin(darts);
  for (int s = 0; s < darts; ++s) {
    const int label = t.boundary_label(s);
    twin[s] = label < 0 ? t.diagonal_twin(s) : t.boundary_slot(pi[label]);
  }
  // Heads to tails: edge i = (i, i+1) meets edge pi(i) = (pi(i), pi(i)+1) reversed.
  DisjointSets ds(m);
  for (int i = 0; i < m; ++i) {
    ds.unite(i, (pi[i] + 1) % m);
    ds.unite((i + 1) % m, pi[i]);
  }
  std::vector<int> corner(darts);
  for (int c = 0; c < darts; ++c) corner[c] = ds.find(t.triangle(c / 3)[c % 3]);

  Triangulation2D tri(std::move(twin), std::move(corner));
  std::vector<int> boundary(m);
  for (int i = 0; i < m; ++i) boundary[i] = t.boundary_slot(i);
  tri.set_distinguished(boundary);
  tri.set_root(t.boundary_slot(0));
  return tri;
}

Unglued unglue(const Triangulation2D& tri) {
  const int root = tri.root();
  if (root < 0 || !tri.distinguished(root)) {
    throw Error(ErrorCode::InvalidArgument, "root must be a distinguished dart");
  }
  const auto e0 = tri.distinguished_darts();
  const int m = static_cast<int>(e0.size());
  const int corners = tri.num_darts();
  std::vector<int> label(corners, -1);
  std::vector<int> dart_label(corners, -1);
  std::vector<int> boundary;
  auto mark = [&](int corner, int value) {
    if (label[corner] >= 0) throw Error(ErrorCode::InvariantViolation, "cut surface is not a disk");
    label[corner] = value;
  };

  // Walk the boundary of the cut disk; corners met while turning around the
  // head of boundary dart i belong to disk vertex i+1.
  int cur = root;
  mark(tail_corner(root), 0);
  for (int i = 0;; ++i) {
    if (i >= m) throw Error(ErrorCode::InvariantViolation, "boundary walk does not close");
    dart_label[cur] = i;
    boundary.push_back(cur);
    int e = Triangulation2D::next(cur);
    int guard = 0;
    while (!tri.distinguished(e)) {
      mark(tail_corner(e), (i + 1) % m);
      e = Triangulation2D::next(tri.twin(e));
      if (++guard > corners) throw Error(ErrorCode::InvariantViolation, "rotation does not terminate");
    }
    if (e == root) {
      if (i + 1 != m) throw Error(ErrorCode::InvariantViolation, "distinguished edges are not a spanning tree");
      break;
    }
    mark(tail_corner(e), i + 1);
    cur = e;
  }
  if (std::find(label.begin(), label.end(), -1) != label.end()) {
    throw Error(ErrorCode::InvariantViolation, "cut surface is not connected");
  }
  if (m % 2 != 0 || m < 4) throw Error(ErrorCode::InvariantViolation, "cut disk has wrong boundary size");
  const int n = m / 2;

  Unglued u;
  const int faces = tri.num_faces();
  std::vector<std::array<int, 3>> tris(faces);
  u.face_rotation.resize(faces);
  for (int f = 0; f < faces; ++f) {
    const std::array<int, 3> l{label[3 * f], label[3 * f + 1], label[3 * f + 2]};
    int r = 0;
    while (r < 3 && !(l[r] < l[(r + 1) % 3] && l[(r + 1) % 3] < l[(r + 2) % 3])) ++r;
    if (r == 3) throw Error(ErrorCode::InvariantViolation, "cut face is not clockwise");
    u.face_rotation[f] = r;
    tris[f] = {l[r], l[(r + 1) % 3], l[(r + 2) % 3]};
  }
  u.t = OuterplanarTriangulation::from_triangles(n, tris);
  std::map<std::array<int, 3>, int> index;
  for (int k = 0; k < u.t.num_triangles(); ++k) index.emplace(u.t.triangle(k), k);
  u.face_to_triangle.resize(faces);
  for (int f = 0; f < faces; ++f) u.face_to_triangle[f] = index.at(tris[f]);

  u.pi.resize(m);
  u.boundary_dart = boundary;
  for (int i = 0; i < m; ++i) {
    const int d = boundary[i];
    u.pi[i] = dart_label[tri.twin(d)];
    const int f = Triangulation2D::face(d);
    const int slot = 3 * u.face_to_triangle[f] + ((d % 3) - u.face_rotation[f] + 3) % 3;
    if (u.pi[i] < 0 || u.t.boundary_slot(i) != slot) {
      throw Error(ErrorCode::InvariantViolation, "cut boundary disagrees with the rebuilt polygon");
    }
  }
  return u;
}

std::optional<TrianglePairing> companion_pairing(const Triangulation2D& tri) {
  if (!tri.is_planar()) throw Error(ErrorCode::NotPlanar, "companion pairing needs a planar triangulation");
  std::map<std::array<int, 3>, std::vector<int>> by_vertices;
  for (int f = 0; f < tri.num_faces(); ++f) {
    auto v = tri.face_vertices(f);
    std::sort(v.begin(), v.end());
    if (v[0] == v[1] || v[1] == v[2]) return std::nullopt;
    by_vertices[v].push_back(f);
  }
  TrianglePairing p;
  p.partner.assign(tri.num_faces(), -1);
  for (const auto& [key, fs] : by_vertices) {
    if (fs.size() != 2) return std::nullopt;
    p.partner[fs[0]] = fs[1];
    p.partner[fs[1]] = fs[0];
  }
  return p;
}

bool is_hierarchical(const Triangulation2D& tri) {
  return tri.is_planar() && companion_pairing(tri).has_value();
}

bool is_in_H(const OuterplanarTriangulation& t, std::span<const int> pi) {
  const Triangulation2D h = glue(t, pi);
  if (!h.is_planar()) return false;
  const auto cp = companion_pairing(h);
  if (!cp) return false;
  for (int i = 0; i < t.boundary_size(); ++i) {
    const int a = Triangulation2D::face(t.boundary_slot(i));
    const int b = Triangulation2D::face(t.boundary_slot(pi[i]));
    if (cp->partner[a] != b) return false;
  }
  return true;
}

bool is_in_H_direct(const OuterplanarTriangulation& t, std::span<const int> pi) {
  const Triangulation2D h = glue(t, pi);
  if (!is_hierarchical(h)) return false;
  std::map<std::pair<int, int>, int> multiplicity;
  for (int d = 0; d < h.num_darts(); ++d) {
    if (d < h.twin(d)) {
      const int a = h.origin(d), b = h.target(d);
      ++multiplicity[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (int d : h.distinguished_darts()) {
    const int a = h.origin(d), b = h.target(d);
    if (a == b || multiplicity[{std::min(a, b), std::max(a, b)}] != 1) return false;
  }
  return true;
}

namespace {

// Rotation of face f starting at v, or nullopt unless v occurs exactly once.
std::optional<std::array<int, 3>> rotate_to(const std::array<int, 3>& f, int v) {
  const int hits = (f[0] == v) + (f[1] == v) + (f[2] == v);
  if (hits != 1) return std::nullopt;
  int r = f[0] == v ? 0 : f[1] == v ? 1 : 2;
  return std::array<int, 3>{f[r], f[(r + 1) % 3], f[(r + 2) % 3]};
}

}  // namespace

std::optional<PeelLog> peel_stacked(std::span<const std::array<int, 3>> faces, int num_vertices) {
  if (num_vertices < 3) return std::nullopt;
  PeelLog log;
  log.faces.assign(faces.begin(), faces.end());
  // incident[v] lists the live faces at v, once per corner.
  std::vector<std::vector<int>> incident(num_vertices);
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    for (int v : faces[f]) {
      if (v < 0 || v >= num_vertices) throw Error(ErrorCode::InvalidArgument, "face vertex out of range");
      incident[v].push_back(f);
    }
  }
  int live_vertices = 0;
  for (const auto& inc : incident) live_vertices += !inc.empty();
  std::vector<char> alive(faces.size(), 1);
  auto drop = [&](int v, int f) {
    auto& inc = incident[v];
    inc.erase(std::find(inc.begin(), inc.end(), f));
  };

  while (live_vertices > 3) {
    bool peeled = false;
    for (int v = 0; v < num_vertices && !peeled; ++v) {
      const auto& inc = incident[v];
      if (inc.size() != 3 || inc[0] == inc[1] || inc[1] == inc[2] || inc[0] == inc[2]) continue;
      std::array<std::array<int, 3>, 3> rot;
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) {
        auto r = rotate_to(log.faces[inc[k]], v);
        if (r) rot[k] = *r; else ok = false;
      }
      if (!ok) continue;
      // Faces (v,a,b), (v,b,c), (v,c,a) in some order.
      std::array<int, 3> star{inc[0], -1, -1};
      const int a = rot[0][1], b = rot[0][2];
      int c = -1;
      for (int k = 1; k < 3; ++k) {
        if (rot[k][1] == b) {
          star[1] = inc[k];
          c = rot[k][2];
        }
      }
      if (star[1] < 0) continue;
      for (int k = 1; k < 3; ++k) {
        if (rot[k][1] == c && rot[k][2] == a && inc[k] != star[1]) star[2] = inc[k];
      }
      if (star[2] < 0 || a == b || b == c || a == c) continue;

      const int created = static_cast<int>(log.faces.size());
      log.faces.push_back({a, b, c});
      alive.push_back(1);
      for (int f : star) alive[f] = 0;
      for (int f : star) {
        for (int u : log.faces[f]) {
          if (u != v) drop(u, f);
        }
      }
      incident[v].clear();
      for (int u : {a, b, c}) incident[u].push_back(created);
      log.steps.push_back({v, star, created});
      --live_vertices;
      peeled = true;
    }
    if (!peeled) return std::nullopt;
  }

  std::vector<int> live;
  for (int f = 0; f < static_cast<int>(log.faces.size()); ++f) {
    if (alive[f]) live.push_back(f);
  }
  if (live.size() != 2) return std::nullopt;
  const auto& f1 = log.faces[live[0]];
  const auto& f2 = log.faces[live[1]];
  if (f1[0] == f1[1] || f1[1] == f1[2] || f1[0] == f1[2]) return std::nullopt;
  const std::array<int, 3> reversed{f1[0], f1[2], f1[1]};
  bool opposite = false;
  for (int r = 0; r < 3; ++r) {
    if (f2 == std::array<int, 3>{reversed[r], reversed[(r + 1) % 3], reversed[(r + 2) % 3]}) opposite = true;
  }
  if (!opposite) return std::nullopt;
  log.last = {live[0], live[1]};
  return log;
}

bool is_apollonian(const Triangulation2D& tri) {
  if (!tri.is_planar()) return false;
  std::vector<std::array<int, 3>> faces(tri.num_faces());
  for (int f = 0; f < tri.num_faces(); ++f) faces[f] = tri.face_vertices(f);
  return peel_stacked(faces, tri.num_vertices()).has_value();
}

bool is_in_A(const OuterplanarTriangulation& t, std::span<const int> pi) {
  return is_apollonian(glue(t, pi));
}

const char* to_string(Rejection r) {
  switch (r) {
    case Rejection::None: return "None";
    case Rejection::SizeMismatch: return "SizeMismatch";
    case Rejection::NotHierarchical: return "NotHierarchical";
    case Rejection::TreeEdgeIn2Cycle: return "TreeEdgeIn2Cycle";
    case Rejection::NotApollonian: return "NotApollonian";
  }
  return "?";
}

Validation validate_triple(const OuterplanarTriangulation& t, const NonCrossingPairing& pi_h,
                           const NonCrossingPairing& pi_a) {
  Validation v;
  if (pi_h.size() != t.boundary_size() || pi_a.size() != t.boundary_size()) {
    v.reason = Rejection::SizeMismatch;
    return v;
  }
  const Triangulation2D h = glue(t, pi_h.partner());
  const auto cp = companion_pairing(h);
  if (!cp) {
    v.reason = Rejection::NotHierarchical;
    return v;
  }
  for (int i = 0; i < t.boundary_size(); ++i) {
    const int a = Triangulation2D::face(t.boundary_slot(i));
    const int b = Triangulation2D::face(t.boundary_slot(pi_h[i]));
    if (cp->partner[a] != b) {
      v.reason = Rejection::TreeEdgeIn2Cycle;
      return v;
    }
  }
  if (!is_in_A(t, pi_a.partner())) {
    v.reason = Rejection::NotApollonian;
    return v;
  }
  v.tree = TripleTree{t, pi_h, pi_a, loop_count(pi_h.partner(), pi_a.partner())};
  return v;
}

TripleTree make_triple(const OuterplanarTriangulation& t, const NonCrossingPairing& pi_h,
                       const NonCrossingPairing& pi_a) {
  auto v = validate_triple(t, pi_h, pi_a);
  if (!v) throw Error(ErrorCode::InvariantViolation, std::string("not a triple tree: ") + to_string(v.reason));
  return std::move(*v.tree);
}

}  // namespace ttlab
