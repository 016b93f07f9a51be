#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttlab/planar_maps.hpp"

namespace ttlab {

// A 2-complex given by K oriented triangles (3K slots, slot 3τ+s opposite
// corner s) and two involutions on slots. pi_t pairs the two oriented copies
// of each complex triangle, reflecting slots: if (τ,s) ↦ (τ',s') then
// (τ,s+k) ↦ (τ',s'−k). pi_c attaches copies along edges, heads to tails.
// Edges are the orbits of <pi_t, pi_c>; an edge lying in p triangles is an
// orbit of 2p slots, and it is free iff pi_c and pi_t agree on it.
class EmbeddedComplex2 {
 public:
  EmbeddedComplex2() = default;
  EmbeddedComplex2(std::vector<int> pi_t, std::vector<int> pi_c);

  int num_slots() const noexcept { return static_cast<int>(pi_t_.size()); }
  int num_oriented_triangles() const noexcept { return num_slots() / 3; }
  int num_triangles() const noexcept { return num_oriented_triangles() / 2; }
  int pi_t(int s) const { return pi_t_[s]; }
  int pi_c(int s) const { return pi_c_[s]; }
  std::span<const int> pi_t() const noexcept { return pi_t_; }
  std::span<const int> pi_c() const noexcept { return pi_c_; }

  // Complex triangle of an oriented copy; ids dense in order of first copy.
  int triangle(int oriented) const { return triangle_[oriented]; }
  int edge(int slot) const { return edge_[slot]; }
  int num_edges() const noexcept { return num_edges_; }
  const std::vector<int>& edge_slots(int e) const { return edge_slots_[e]; }
  int edge_multiplicity(int e) const { return static_cast<int>(edge_slots_[e].size() / 2); }
  bool is_free(int e) const { return edge_multiplicity(e) == 1; }
  int vertex(int corner) const { return vertex_[corner]; }
  int num_vertices() const noexcept { return num_vertices_; }
  // Endpoint vertices of an edge (unordered pair, smaller first).
  std::pair<int, int> edge_vertices(int e) const;
  // The three edges of a complex triangle.
  std::array<int, 3> triangle_edges(int tri) const;

  // The triangle/edge incidence graph is a tree.
  bool is_tree_of_triangles() const;
  // Attaches the oriented copies along pi_c only.
  Triangulation2D split() const;

  struct Cut;
  // Replaces pi_c by pi_t on the slots of the given edges.
  Cut cut_along(std::span<const int> edges) const;

  friend bool operator==(const EmbeddedComplex2& a, const EmbeddedComplex2& b) {
    return a.pi_t_ == b.pi_t_ && a.pi_c_ == b.pi_c_;
  }

 private:
  std::vector<int> pi_t_, pi_c_;
  std::vector<int> triangle_;
  std::vector<int> edge_;
  std::vector<std::vector<int>> edge_slots_;
  std::vector<int> vertex_;
  int num_edges_ = 0;
  int num_vertices_ = 0;
};

struct EmbeddedComplex2::Cut {
  EmbeddedComplex2 complex;
  std::vector<int> cut_edges;  // the free edges created, as edges of `complex`
};

// Spanning-tree test on an abstract graph.
bool is_spanning_tree(int num_vertices, std::span<const std::pair<int, int>> edges);

// A complex with a distinguished edge set and a root slot.
struct DecoratedComplex {
  EmbeddedComplex2 complex;
  std::vector<int> tree_edges;
  int root_slot = -1;
};

// Id[h]: pi_c is the twin map of h, pi_t pairs companion faces slot by slot.
// Distinguished edges are those made of distinguished darts of h.
DecoratedComplex id_hierarchical(const Triangulation2D& h);
// Id_{pi_h}[Glue(t, pi)]: companions from Glue(t, pi_h), attachments from Glue(t, pi).
EmbeddedComplex2 id_pi(const OuterplanarTriangulation& t, std::span<const int> pi_h, std::span<const int> pi);
// Edges of id_pi(t, pi_h, pi) whose slots are all boundary slots of t. Throws
// if some edge mixes boundary and interior slots.
std::vector<int> distinguished_tree(const OuterplanarTriangulation& t, std::span<const int> pi_h,
                                    std::span<const int> pi);

// Face gluing: local vertex v of this tetrahedron meets local vertex perm[v]
// of the target; face f (opposite vertex f) meets face perm[f].
struct FaceGluing {
  int tet = -1;
  int face = -1;
  std::array<int, 4> perm{-1, -1, -1, -1};
  bool glued() const noexcept { return tet >= 0; }
};

inline constexpr int kLocalEdge[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};

// Stacked ball bounded by an Apollonian triangulation. Face c of the boundary
// is face `face` of tetrahedron `tet`; corner k of the boundary face is local
// vertex local[k].
struct BoundaryFace {
  int tet = -1;
  int face = -1;
  std::array<int, 3> local{-1, -1, -1};
};
struct TreeOfTetrahedra {
  std::vector<std::array<FaceGluing, 4>> gluing;  // internal faces only
  std::vector<BoundaryFace> boundary;
  int num_tetrahedra() const noexcept { return static_cast<int>(gluing.size()); }
  bool is_tree() const;
};
TreeOfTetrahedra tetra_tree_from_apollonian(const Triangulation2D& a);
// Boundary surface rebuilt from the tetrahedra, faces in `boundary` order.
Triangulation2D tree_boundary(const TreeOfTetrahedra& tree);

// Marked oriented edge u->v of a triangle (tet, face) outside T0.
struct RootCorner {
  int tet = -1;
  int face = -1;
  int u = -1;
  int v = -1;
  friend bool operator==(const RootCorner&, const RootCorner&) = default;
};

class Triangulation3D {
 public:
  Triangulation3D() = default;
  explicit Triangulation3D(int tets) : gluing_(tets) {}

  int num_tetrahedra() const noexcept { return static_cast<int>(gluing_.size()); }
  void glue(int tet, int face, int target, int target_face, std::array<int, 4> perm);
  const FaceGluing& gluing(int tet, int face) const { return gluing_[tet][face]; }
  bool is_closed() const;

  // Classes are recomputed after every glue() on first use.
  int vertex_class(int tet, int v) const;
  int edge_class(int tet, int a, int b) const;
  int num_vertices() const;
  int num_edges() const;
  int num_triangles() const;
  int euler_characteristic() const;

  void set_tree(std::span<const std::array<int, 2>> faces);  // (tet, face) on either side
  bool in_tree(int tet, int face) const { return !tree_.empty() && tree_[4 * tet + face]; }
  std::vector<std::array<int, 2>> tree_faces() const;  // one side each, tet < target or same tet
  void set_edge_tree(std::vector<int> edge_classes);
  const std::vector<int>& edge_tree() const noexcept { return edge_tree_; }
  bool in_edge_tree(int edge_class) const;
  void set_root(RootCorner r) { root_ = r; }
  const RootCorner& root() const noexcept { return root_; }

  // Relabelling-invariant code of (T, T0, E, root), by breadth-first search
  // from the root tetrahedron.
  std::vector<int> canonical_code() const;

 private:
  void classify() const;

  std::vector<std::array<FaceGluing, 4>> gluing_;
  std::vector<char> tree_;
  std::vector<int> edge_tree_;
  RootCorner root_;
  mutable bool classified_ = false;
  mutable std::vector<int> vertex_, edge_;
  mutable int num_vertices_ = 0, num_edges_ = 0;
};

// T^{T0} as seen from the boundary of T0. Face f of `boundary` is triangle
// (tet, face) = handle[f] with corner k at local vertex local[f][k]; pi_t of
// `complex` is the face gluing of T between boundary faces.
struct TreeComplex {
  Triangulation2D boundary;
  EmbeddedComplex2 complex;
  std::vector<std::array<int, 2>> handle;
  std::vector<std::array<int, 3>> local;
};
// Requires T0 to be a spanning tree of the dual graph. Distinguished darts of
// the boundary are those on edges of E; its root is the root corner.
TreeComplex tree_complex(const Triangulation3D& T);

enum class MembershipIssue {
  None,
  NotClosed,
  T0NotSpanningTree,
  BadRoot,
  NotOrientable,
  ECycle,
  ENotSpanning,
  NotTreeOfTriangles,
  CutNotSpanningTree,
  NotATripleTree,
};
const char* to_string(MembershipIssue m);

struct MembershipReport {
  MembershipIssue issue = MembershipIssue::None;
  std::string detail;
  bool ok() const noexcept { return issue == MembershipIssue::None; }
};
MembershipReport verify_membership(const Triangulation3D& T);

// Forward map; sizes below 4 have no tetrahedra and throw DegenerateSize.
Triangulation3D triple_to_triangulation(const TripleTree& tt);
// Reverse map; throws MembershipFailed.
TripleTree triangulation_to_triple(const Triangulation3D& T);

}  // namespace ttlab
