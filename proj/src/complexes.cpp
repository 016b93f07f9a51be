#include "ttlab/complexes.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "ttlab/meander.hpp"

namespace ttlab {

namespace {

int find_index(const std::array<int, 4>& a, int x) {
  for (int i = 0; i < 4; ++i) {
    if (a[i] == x) return i;
  }
  return -1;
}

int remaining_vertex(int a, int b, int c) { return 6 - a - b - c; }

bool is_permutation4(const std::array<int, 4>& p) {
  std::array<int, 4> seen{};
  for (int x : p) {
    if (x < 0 || x > 3 || seen[x]++) return false;
  }
  return true;
}

std::array<int, 4> inverse(const std::array<int, 4>& p) {
  std::array<int, 4> q{};
  for (int i = 0; i < 4; ++i) q[p[i]] = i;
  return q;
}

}  // namespace

bool is_spanning_tree(int num_vertices, std::span<const std::pair<int, int>> edges) {
  if (num_vertices < 1 || static_cast<int>(edges.size()) != num_vertices - 1) return false;
  DisjointSets ds(num_vertices);
  for (auto [a, b] : edges) {
    if (!ds.unite(a, b)) return false;
  }
  return true;
}

EmbeddedComplex2::EmbeddedComplex2(std::vector<int> pi_t, std::vector<int> pi_c)
    : pi_t_(std::move(pi_t)), pi_c_(std::move(pi_c)) {
  const int slots = num_slots();
  if (pi_c_.size() != pi_t_.size() || slots % 6 != 0) {
    throw Error(ErrorCode::SizeMismatch, "complex needs an even number of oriented triangles");
  }
  if (!is_involution(pi_t_) || !is_involution(pi_c_)) {
    throw Error(ErrorCode::InvalidArgument, "complex slot maps must be fixed-point-free involutions");
  }
  const int K = num_oriented_triangles();
  triangle_.assign(K, -1);
  int next_tri = 0;
  for (int tau = 0; tau < K; ++tau) {
    const int image = pi_t_[3 * tau];
    const int other = image / 3;
    if (other == tau) throw Error(ErrorCode::InvariantViolation, "pi_t pairs a triangle with itself");
    for (int k = 0; k < 3; ++k) {
      if (pi_t_[3 * tau + k] != 3 * other + ((image % 3) - k + 3) % 3) {
        throw Error(ErrorCode::InvariantViolation, "pi_t is not a reflection between two copies");
      }
    }
    if (triangle_[tau] < 0) {
      triangle_[tau] = next_tri;
      triangle_[other] = next_tri++;
    }
  }

  DisjointSets slots_ds(slots);
  DisjointSets corners(slots);
  for (int s = 0; s < slots; ++s) {
    for (int u : {pi_t_[s], pi_c_[s]}) {
      slots_ds.unite(s, u);
      corners.unite(tail_corner(s), head_corner(u));
      corners.unite(head_corner(s), tail_corner(u));
    }
  }
  edge_ = slots_ds.labels();
  num_edges_ = static_cast<int>(slots_ds.components());
  edge_slots_.assign(num_edges_, {});
  for (int s = 0; s < slots; ++s) edge_slots_[edge_[s]].push_back(s);
  vertex_ = corners.labels();
  num_vertices_ = static_cast<int>(corners.components());
}

std::pair<int, int> EmbeddedComplex2::edge_vertices(int e) const {
  const int s = edge_slots_[e].front();
  const int a = vertex_[tail_corner(s)], b = vertex_[head_corner(s)];
  return {std::min(a, b), std::max(a, b)};
}

std::array<int, 3> EmbeddedComplex2::triangle_edges(int tri) const {
  const int tau = static_cast<int>(std::find(triangle_.begin(), triangle_.end(), tri) - triangle_.begin());
  return {edge_[3 * tau], edge_[3 * tau + 1], edge_[3 * tau + 2]};
}

bool EmbeddedComplex2::is_tree_of_triangles() const {
  const int tris = num_triangles();
  std::vector<std::pair<int, int>> incidences;
  std::vector<char> done(tris, 0);
  for (int tau = 0; tau < num_oriented_triangles(); ++tau) {
    if (done[triangle_[tau]]++) continue;
    for (int k = 0; k < 3; ++k) incidences.push_back({triangle_[tau], tris + edge_[3 * tau + k]});
  }
  return is_spanning_tree(tris + num_edges_, incidences);
}

Triangulation2D EmbeddedComplex2::split() const { return Triangulation2D(pi_c_); }

EmbeddedComplex2::Cut EmbeddedComplex2::cut_along(std::span<const int> edges) const {
  std::vector<int> pi_c = pi_c_;
  std::vector<char> cut(num_edges_, 0);
  for (int e : edges) {
    if (e < 0 || e >= num_edges_) throw Error(ErrorCode::InvalidArgument, "cut edge out of range");
    cut[e] = 1;
  }
  for (int s = 0; s < num_slots(); ++s) {
    if (cut[edge_[s]]) pi_c[s] = pi_t_[s];
  }
  Cut out{EmbeddedComplex2(pi_t_, std::move(pi_c)), {}};
  std::set<int> created;
  for (int s = 0; s < num_slots(); ++s) {
    if (cut[edge_[s]]) created.insert(out.complex.edge(s));
  }
  out.cut_edges.assign(created.begin(), created.end());
  return out;
}

namespace {

// pi_t of Id[h]: slot s of face f meets the slot of its companion carrying the
// same two vertex classes, with tail and head exchanged.
std::vector<int> companion_slots(const Triangulation2D& h) {
  const auto cp = companion_pairing(h);
  if (!cp) throw Error(ErrorCode::NotHierarchical, "triangulation is not hierarchical");
  std::vector<int> pi_t(h.num_darts(), -1);
  for (int d = 0; d < h.num_darts(); ++d) {
    const int f = Triangulation2D::face(d), g = cp->partner[f];
    const int opposite = h.vertex(d);  // corner s is opposite slot s
    for (int k = 0; k < 3; ++k) {
      if (h.vertex(3 * g + k) != opposite) continue;
      const int e = 3 * g + k;
      if (h.origin(d) != h.target(e) || h.target(d) != h.origin(e)) {
        throw Error(ErrorCode::InvariantViolation, "companions are not oppositely oriented");
      }
      pi_t[d] = e;
    }
  }
  return pi_t;
}

}  // namespace

DecoratedComplex id_hierarchical(const Triangulation2D& h) {
  DecoratedComplex out;
  auto pi_c = std::vector<int>(h.twins().begin(), h.twins().end());
  out.complex = EmbeddedComplex2(companion_slots(h), std::move(pi_c));
  for (int e = 0; e < out.complex.num_edges(); ++e) {
    const auto& slots = out.complex.edge_slots(e);
    const auto marked = std::count_if(slots.begin(), slots.end(), [&](int s) { return h.distinguished(s); });
    if (marked == static_cast<long>(slots.size())) {
      out.tree_edges.push_back(e);
    } else if (marked != 0) {
      throw Error(ErrorCode::InvariantViolation, "complex edge mixes distinguished and plain darts");
    }
  }
  out.root_slot = h.root();
  return out;
}

EmbeddedComplex2 id_pi(const OuterplanarTriangulation& t, std::span<const int> pi_h, std::span<const int> pi) {
  if (!is_in_H(t, pi_h)) throw Error(ErrorCode::NotHierarchical, "pi_h does not glue to a member of H");
  const Triangulation2D h = glue(t, pi_h);
  const Triangulation2D g = glue(t, pi);
  return EmbeddedComplex2(companion_slots(h), std::vector<int>(g.twins().begin(), g.twins().end()));
}

std::vector<int> distinguished_tree(const OuterplanarTriangulation& t, std::span<const int> pi_h,
                                    std::span<const int> pi) {
  const EmbeddedComplex2 c = id_pi(t, pi_h, pi);
  std::vector<int> out;
  for (int e = 0; e < c.num_edges(); ++e) {
    const auto& slots = c.edge_slots(e);
    const auto marked = std::count_if(slots.begin(), slots.end(), [&](int s) { return t.boundary_label(s) >= 0; });
    if (marked == static_cast<long>(slots.size())) {
      out.push_back(e);
    } else if (marked != 0) {
      throw Error(ErrorCode::InvariantViolation, "complex edge mixes boundary and diagonal slots");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trees of tetrahedra.

bool TreeOfTetrahedra::is_tree() const {
  std::vector<std::pair<int, int>> adj;
  for (int k = 0; k < num_tetrahedra(); ++k) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluing[k][f];
      if (g.glued() && (k < g.tet || (k == g.tet && f < g.face))) adj.push_back({k, g.tet});
    }
  }
  return is_spanning_tree(num_tetrahedra(), adj);
}

TreeOfTetrahedra tetra_tree_from_apollonian(const Triangulation2D& a) {
  if (!a.is_planar()) throw Error(ErrorCode::NotPlanar, "stacked boundary must be planar");
  if (a.num_vertices() < 4) throw Error(ErrorCode::InvalidArgument, "a tree of tetrahedra needs at least 4 vertices");
  std::vector<std::array<int, 3>> faces(a.num_faces());
  for (int f = 0; f < a.num_faces(); ++f) faces[f] = a.face_vertices(f);
  const auto log = peel_stacked(faces, a.num_vertices());
  if (!log) throw Error(ErrorCode::NotApollonian, "triangulation is not Apollonian");

  const int F = a.num_faces();
  const int tets = static_cast<int>(log->steps.size());
  TreeOfTetrahedra tree;
  tree.gluing.resize(tets);
  tree.boundary.resize(F);
  std::vector<std::array<int, 4>> verts(tets);
  // Face handle: input faces are boundary triangles, created face of step k
  // is face 0 of tetrahedron k.
  auto tet_of = [&](int face) { return face < F ? -1 : face - F; };

  auto attach = [&](int face, int tet, int local_face) {
    const auto& fv = log->faces[face];
    const int other = tet_of(face);
    if (other < 0) {
      BoundaryFace& b = tree.boundary[face];
      b.tet = tet;
      b.face = local_face;
      for (int c = 0; c < 3; ++c) b.local[c] = find_index(verts[tet], fv[c]);
      return;
    }
    std::array<int, 4> perm{};
    for (int x = 0; x < 4; ++x) perm[x] = x == local_face ? 0 : find_index(verts[other], verts[tet][x]);
    if (!is_permutation4(perm)) throw Error(ErrorCode::InvariantViolation, "stacked faces do not match");
    tree.gluing[tet][local_face] = {other, 0, perm};
    tree.gluing[other][0] = {tet, local_face, inverse(perm)};
  };

  for (int k = 0; k < tets; ++k) {
    const auto& step = log->steps[k];
    const auto& abc = log->faces[step.created];
    verts[k] = {step.vertex, abc[0], abc[1], abc[2]};
    // (w,a,b) misses c, (w,b,c) misses a, (w,c,a) misses b.
    attach(step.star[0], k, 3);
    attach(step.star[1], k, 1);
    attach(step.star[2], k, 2);
  }
  // The final double triangle: either two inner faces meet, or a boundary
  // triangle is itself the inner face of the last tetrahedron.
  int f0 = log->last[0], f1 = log->last[1];
  if (tet_of(f0) < 0) std::swap(f0, f1);
  attach(f1, tet_of(f0), 0);
  for (const auto& b : tree.boundary) {
    if (b.tet < 0) throw Error(ErrorCode::InvariantViolation, "boundary face left unassigned");
  }
  return tree;
}

namespace {

struct Side {
  int tet, face, u, v;
};

// Turns around edge uv starting from face (tet, face) through faces accepted
// by `internal`, returning the first face that is not internal.
template <class Gluing, class Internal>
Side turn_through(const Gluing& gluing, const Internal& internal, Side s) {
  const int limit = 4 * static_cast<int>(gluing.size()) + 4;
  for (int it = 0; it < limit; ++it) {
    const int r = remaining_vertex(s.face, s.u, s.v);
    if (!internal(s.tet, r)) return {s.tet, r, s.u, s.v};
    const FaceGluing& g = gluing[s.tet][r];
    s = {g.tet, g.face, g.perm[s.u], g.perm[s.v]};
  }
  throw Error(ErrorCode::InvariantViolation, "edge rotation does not reach the boundary");
}

int slot_with(const std::array<int, 3>& local, int tail, int head) {
  for (int s = 0; s < 3; ++s) {
    if (local[(s + 1) % 3] == tail && local[(s + 2) % 3] == head) return s;
  }
  return -1;
}

}  // namespace

Triangulation2D tree_boundary(const TreeOfTetrahedra& tree) {
  std::map<std::pair<int, int>, int> face_of;
  for (int f = 0; f < static_cast<int>(tree.boundary.size()); ++f) {
    face_of[{tree.boundary[f].tet, tree.boundary[f].face}] = f;
  }
  auto internal = [&](int k, int q) { return tree.gluing[k][q].glued(); };
  const int F = static_cast<int>(tree.boundary.size());
  std::vector<int> twin(3 * F);
  for (int f = 0; f < F; ++f) {
    const auto& b = tree.boundary[f];
    for (int s = 0; s < 3; ++s) {
      const Side end = turn_through(tree.gluing, internal,
                                    {b.tet, b.face, b.local[(s + 1) % 3], b.local[(s + 2) % 3]});
      const int g = face_of.at({end.tet, end.face});
      const int e = slot_with(tree.boundary[g].local, end.v, end.u);
      if (e < 0) throw Error(ErrorCode::InvariantViolation, "boundary faces are not oppositely oriented");
      twin[3 * f + s] = 3 * g + e;
    }
  }
  return Triangulation2D(std::move(twin));
}

// ---------------------------------------------------------------------------
// Closed 3D triangulations.

void Triangulation3D::glue(int tet, int face, int target, int target_face, std::array<int, 4> perm) {
  const int T = num_tetrahedra();
  if (tet < 0 || tet >= T || target < 0 || target >= T || face < 0 || face > 3 || target_face < 0 ||
      target_face > 3) {
    throw Error(ErrorCode::InvalidArgument, "face gluing out of range");
  }
  if (!is_permutation4(perm) || perm[face] != target_face) {
    throw Error(ErrorCode::InvalidArgument, "face gluing permutation is invalid");
  }
  if (tet == target && face == target_face) throw Error(ErrorCode::InvalidArgument, "face glued to itself");
  if (gluing_[tet][face].glued() || gluing_[target][target_face].glued()) {
    throw Error(ErrorCode::InvalidArgument, "face already glued");
  }
  gluing_[tet][face] = {target, target_face, perm};
  gluing_[target][target_face] = {tet, face, inverse(perm)};
  classified_ = false;
}

bool Triangulation3D::is_closed() const {
  for (const auto& g : gluing_) {
    for (const auto& f : g) {
      if (!f.glued()) return false;
    }
  }
  return true;
}

void Triangulation3D::classify() const {
  if (classified_) return;
  const int T = num_tetrahedra();
  DisjointSets vs(4 * T), es(6 * T);
  for (int k = 0; k < T; ++k) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluing_[k][f];
      if (!g.glued()) continue;
      for (int a = 0; a < 4; ++a) {
        if (a == f) continue;
        vs.unite(4 * k + a, 4 * g.tet + g.perm[a]);
        for (int b = a + 1; b < 4; ++b) {
          if (b == f) continue;
          es.unite(6 * k + kLocalEdge[a][b], 6 * g.tet + kLocalEdge[g.perm[a]][g.perm[b]]);
        }
      }
    }
  }
  vertex_ = vs.labels();
  edge_ = es.labels();
  num_vertices_ = static_cast<int>(vs.components());
  num_edges_ = static_cast<int>(es.components());
  classified_ = true;
}

int Triangulation3D::vertex_class(int tet, int v) const {
  classify();
  return vertex_[4 * tet + v];
}

int Triangulation3D::edge_class(int tet, int a, int b) const {
  classify();
  return edge_[6 * tet + kLocalEdge[a][b]];
}

int Triangulation3D::num_vertices() const {
  classify();
  return num_vertices_;
}

int Triangulation3D::num_edges() const {
  classify();
  return num_edges_;
}

int Triangulation3D::num_triangles() const {
  int free = 0, glued = 0;
  for (const auto& g : gluing_) {
    for (const auto& f : g) (f.glued() ? glued : free)++;
  }
  return free + glued / 2;
}

int Triangulation3D::euler_characteristic() const {
  return num_vertices() - num_edges() + num_triangles() - num_tetrahedra();
}

void Triangulation3D::set_tree(std::span<const std::array<int, 2>> faces) {
  tree_.assign(4 * gluing_.size(), 0);
  for (auto [k, f] : faces) {
    const auto& g = gluing_.at(k).at(f);
    if (!g.glued()) throw Error(ErrorCode::InvalidArgument, "tree face is not glued");
    tree_[4 * k + f] = 1;
    tree_[4 * g.tet + g.face] = 1;
  }
}

std::vector<std::array<int, 2>> Triangulation3D::tree_faces() const {
  std::vector<std::array<int, 2>> out;
  for (int k = 0; k < num_tetrahedra(); ++k) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = gluing_[k][f];
      if (in_tree(k, f) && (k < g.tet || (k == g.tet && f < g.face))) out.push_back({k, f});
    }
  }
  return out;
}

void Triangulation3D::set_edge_tree(std::vector<int> edge_classes) {
  std::sort(edge_classes.begin(), edge_classes.end());
  edge_classes.erase(std::unique(edge_classes.begin(), edge_classes.end()), edge_classes.end());
  edge_tree_ = std::move(edge_classes);
}

bool Triangulation3D::in_edge_tree(int edge_class) const {
  return std::binary_search(edge_tree_.begin(), edge_tree_.end(), edge_class);
}

std::vector<int> Triangulation3D::canonical_code() const {
  const int T = num_tetrahedra();
  std::vector<int> code{T};
  if (T == 0 || root_.tet < 0) return code;
  std::vector<int> index(T, -1);
  std::vector<std::array<int, 4>> order(T);  // canonical position -> local vertex
  std::vector<int> queue{root_.tet};
  index[root_.tet] = 0;
  order[root_.tet] = {root_.u, root_.v, remaining_vertex(root_.face, root_.u, root_.v), root_.face};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int k = queue[head];
    const auto& L = order[k];
    for (int j = 0; j < 4; ++j) {
      const auto& g = gluing_[k][L[j]];
      if (!g.glued()) {
        code.insert(code.end(), {-1, -1, -1, -1, -1, -1, 0});
        continue;
      }
      if (index[g.tet] < 0) {
        index[g.tet] = static_cast<int>(queue.size());
        queue.push_back(g.tet);
        for (int i = 0; i < 4; ++i) order[g.tet][i] = g.perm[L[i]];
      }
      const auto& M = order[g.tet];
      code.push_back(index[g.tet]);
      for (int i = 0; i < 4; ++i) code.push_back(find_index(M, g.perm[L[i]]));
      code.push_back(find_index(M, g.face));
      code.push_back(in_tree(k, L[j]) ? 1 : 0);
    }
  }
  code.push_back(static_cast<int>(queue.size()));
  for (int k : queue) {
    const auto& L = order[k];
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) code.push_back(in_edge_tree(edge_class(k, L[a], L[b])) ? 1 : 0);
    }
  }
  return code;
}

// ---------------------------------------------------------------------------
// T^{T0} and membership.

TreeComplex tree_complex(const Triangulation3D& T) {
  const int tets = T.num_tetrahedra();
  const RootCorner& r = T.root();
  auto internal = [&](int k, int q) { return T.in_tree(k, q); };
  std::vector<std::array<FaceGluing, 4>> gl(tets);
  for (int k = 0; k < tets; ++k) {
    for (int q = 0; q < 4; ++q) gl[k][q] = T.gluing(k, q);
  }

  TreeComplex tc;
  std::map<std::pair<int, int>, int> face_of;
  for (int k = 0; k < tets; ++k) {
    for (int q = 0; q < 4; ++q) {
      if (!T.in_tree(k, q)) {
        face_of[{k, q}] = static_cast<int>(tc.handle.size());
        tc.handle.push_back({k, q});
      }
    }
  }
  const int F = static_cast<int>(tc.handle.size());
  tc.local.assign(F, {-1, -1, -1});
  const auto root_face = face_of.find({r.tet, r.face});
  if (root_face == face_of.end()) throw Error(ErrorCode::MembershipFailed, "root triangle lies in T0");

  // Orient the boundary of T0 from the root and propagate across edges.
  std::vector<int> twin(3 * F, -1);
  std::queue<int> todo;
  tc.local[root_face->second] = {r.u, r.v, remaining_vertex(r.face, r.u, r.v)};
  todo.push(root_face->second);
  while (!todo.empty()) {
    const int f = todo.front();
    todo.pop();
    const auto [k, q] = tc.handle[f];
    for (int s = 0; s < 3; ++s) {
      const int x = tc.local[f][(s + 1) % 3], y = tc.local[f][(s + 2) % 3];
      const Side end = turn_through(gl, internal, {k, q, x, y});
      const int g = face_of.at({end.tet, end.face});
      if (tc.local[g][0] < 0) {
        tc.local[g] = {end.v, end.u, remaining_vertex(end.face, end.u, end.v)};
        todo.push(g);
      }
      const int e = slot_with(tc.local[g], end.v, end.u);
      if (e < 0) throw Error(ErrorCode::MembershipFailed, "boundary of T0 is not orientable from the root");
      twin[3 * f + s] = 3 * g + e;
    }
  }
  if (std::find(twin.begin(), twin.end(), -1) != twin.end()) {
    throw Error(ErrorCode::MembershipFailed, "boundary of T0 is not connected");
  }
  tc.boundary = Triangulation2D(twin);

  std::vector<int> pi_t(3 * F, -1);
  std::vector<int> marked;
  for (int f = 0; f < F; ++f) {
    const auto [k, q] = tc.handle[f];
    const FaceGluing& g = T.gluing(k, q);
    const int other = face_of.at({g.tet, g.face});
    for (int s = 0; s < 3; ++s) {
      const int x = tc.local[f][(s + 1) % 3], y = tc.local[f][(s + 2) % 3];
      const int e = slot_with(tc.local[other], g.perm[y], g.perm[x]);
      if (e < 0) throw Error(ErrorCode::MembershipFailed, "face gluing preserves orientation");
      pi_t[3 * f + s] = 3 * other + e;
      if (T.in_edge_tree(T.edge_class(k, x, y))) marked.push_back(3 * f + s);
    }
  }
  tc.boundary.set_distinguished(marked);
  tc.boundary.set_root(3 * root_face->second + 2);
  tc.complex = EmbeddedComplex2(std::move(pi_t), std::vector<int>(twin.begin(), twin.end()));
  return tc;
}

const char* to_string(MembershipIssue m) {
  switch (m) {
    case MembershipIssue::None: return "OK";
    case MembershipIssue::NotClosed: return "NotClosed";
    case MembershipIssue::T0NotSpanningTree: return "T0NotSpanningTree";
    case MembershipIssue::BadRoot: return "BadRoot";
    case MembershipIssue::NotOrientable: return "NotOrientable";
    case MembershipIssue::ECycle: return "ECycle";
    case MembershipIssue::ENotSpanning: return "ENotSpanning";
    case MembershipIssue::NotTreeOfTriangles: return "NotTreeOfTriangles";
    case MembershipIssue::CutNotSpanningTree: return "CutNotSpanningTree";
    case MembershipIssue::NotATripleTree: return "NotATripleTree";
  }
  return "?";
}

MembershipReport verify_membership(const Triangulation3D& T) {
  auto fail = [](MembershipIssue m, std::string detail) { return MembershipReport{m, std::move(detail)}; };
  const int tets = T.num_tetrahedra();
  if (tets < 1 || !T.is_closed()) return fail(MembershipIssue::NotClosed, "some face is unglued");

  std::vector<std::pair<int, int>> dual;
  for (auto [k, f] : T.tree_faces()) dual.push_back({k, T.gluing(k, f).tet});
  if (!is_spanning_tree(tets, dual)) return fail(MembershipIssue::T0NotSpanningTree, "T0 is not a dual spanning tree");

  const RootCorner& r = T.root();
  if (r.tet < 0 || r.tet >= tets || r.face < 0 || r.face > 3 || r.u < 0 || r.u > 3 || r.v < 0 || r.v > 3 ||
      r.u == r.v || r.u == r.face || r.v == r.face || T.in_tree(r.tet, r.face)) {
    return fail(MembershipIssue::BadRoot, "root corner is not an edge of a triangle outside T0");
  }

  std::vector<std::pair<int, int>> edge_ends(T.num_edges(), {-1, -1});
  for (int k = 0; k < tets; ++k) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) edge_ends[T.edge_class(k, a, b)] = {T.vertex_class(k, a), T.vertex_class(k, b)};
    }
  }
  std::vector<std::pair<int, int>> e_edges;
  DisjointSets ds(T.num_vertices());
  for (int e : T.edge_tree()) {
    if (e < 0 || e >= T.num_edges()) return fail(MembershipIssue::ECycle, "edge class out of range");
    e_edges.push_back(edge_ends[e]);
    if (!ds.unite(edge_ends[e].first, edge_ends[e].second)) return fail(MembershipIssue::ECycle, "E contains a cycle");
  }
  if (ds.components() != 1) return fail(MembershipIssue::ENotSpanning, "E does not span the vertices");
  if (!T.in_edge_tree(T.edge_class(r.tet, r.u, r.v))) return fail(MembershipIssue::BadRoot, "root edge is not in E");

  TreeComplex tc;
  try {
    tc = tree_complex(T);
  } catch (const Error& e) {
    return fail(MembershipIssue::NotOrientable, e.what());
  }
  std::vector<int> cut_edges;
  for (int e = 0; e < tc.complex.num_edges(); ++e) {
    if (tc.boundary.distinguished(tc.complex.edge_slots(e).front())) cut_edges.push_back(e);
  }
  const auto cut = tc.complex.cut_along(cut_edges);
  if (!cut.complex.is_tree_of_triangles()) {
    return fail(MembershipIssue::NotTreeOfTriangles, "T^{T0} cut along E is not a tree of triangles");
  }
  std::vector<std::pair<int, int>> cut_graph;
  for (int e : cut.cut_edges) cut_graph.push_back(cut.complex.edge_vertices(e));
  if (!is_spanning_tree(cut.complex.num_vertices(), cut_graph)) {
    return fail(MembershipIssue::CutNotSpanningTree, "Cut(E) is not a spanning tree");
  }
  return {};
}

Triangulation3D triple_to_triangulation(const TripleTree& tt) {
  const int n = tt.n();
  if (n < 4) throw Error(ErrorCode::DegenerateSize, "triple trees below size 4 have no tetrahedra");
  const OuterplanarTriangulation& t = tt.t;
  const Triangulation2D a = glue(t, tt.pi_a.partner());
  const TreeOfTetrahedra tree = tetra_tree_from_apollonian(a);

  Triangulation3D T(tree.num_tetrahedra());
  std::vector<std::array<int, 2>> t0;
  for (int k = 0; k < tree.num_tetrahedra(); ++k) {
    for (int q = 0; q < 4; ++q) {
      const auto& g = tree.gluing[k][q];
      if (g.glued() && (k < g.tet || (k == g.tet && q < g.face))) {
        T.glue(k, q, g.tet, g.face, g.perm);
        t0.push_back({k, q});
      }
    }
  }
  T.set_tree(t0);

  const Triangulation2D h = glue(t, tt.pi_h.partner());
  const auto cp = companion_pairing(h);
  if (!cp) throw Error(ErrorCode::NotHierarchical, "pi_h does not glue to a hierarchical triangulation");
  for (int i = 0; i < t.num_triangles(); ++i) {
    const int j = cp->partner[i];
    if (j < i) continue;
    const auto& bi = tree.boundary[i];
    const auto& bj = tree.boundary[j];
    std::array<int, 4> perm{};
    perm[bi.face] = bj.face;
    for (int c = 0; c < 3; ++c) {
      for (int c2 = 0; c2 < 3; ++c2) {
        if (h.vertex(3 * i + c) == h.vertex(3 * j + c2)) perm[bi.local[c]] = bj.local[c2];
      }
    }
    T.glue(bi.tet, bi.face, bj.tet, bj.face, perm);
  }

  std::vector<int> e_classes;
  for (int i = 0; i < t.boundary_size(); ++i) {
    const int s = t.boundary_slot(i);
    const auto& b = tree.boundary[s / 3];
    e_classes.push_back(T.edge_class(b.tet, b.local[tail_corner(s) % 3], b.local[head_corner(s) % 3]));
  }
  T.set_edge_tree(std::move(e_classes));
  const int s0 = t.boundary_slot(0);
  const auto& b0 = tree.boundary[s0 / 3];
  T.set_root({b0.tet, b0.face, b0.local[tail_corner(s0) % 3], b0.local[head_corner(s0) % 3]});
  return T;
}

TripleTree triangulation_to_triple(const Triangulation3D& T) {
  const auto report = verify_membership(T);
  if (!report.ok()) {
    throw Error(ErrorCode::MembershipFailed, std::string(to_string(report.issue)) + ": " + report.detail);
  }
  const TreeComplex tc = tree_complex(T);
  Unglued u;
  try {
    u = unglue(tc.boundary);
  } catch (const Error& e) {
    throw Error(ErrorCode::MembershipFailed, std::string("cutting the boundary along E failed: ") + e.what());
  }
  const int m = u.t.boundary_size();
  std::vector<int> label(tc.boundary.num_darts(), -1);
  for (int i = 0; i < m; ++i) label[u.boundary_dart[i]] = i;
  std::vector<int> pi_h(m);
  for (int i = 0; i < m; ++i) {
    pi_h[i] = label[tc.complex.pi_t(u.boundary_dart[i])];
    if (pi_h[i] < 0) throw Error(ErrorCode::MembershipFailed, "E is not matched by the face gluing");
  }
  try {
    auto v = validate_triple(u.t, NonCrossingPairing(pi_h), NonCrossingPairing(u.pi));
    if (!v) throw Error(ErrorCode::MembershipFailed, std::string("NotATripleTree: ") + to_string(v.reason));
    return std::move(*v.tree);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MembershipFailed) throw;
    throw Error(ErrorCode::MembershipFailed, std::string("NotATripleTree: ") + e.what());
  }
}

}  // namespace ttlab
