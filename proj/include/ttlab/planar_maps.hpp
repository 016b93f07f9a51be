#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttlab/core.hpp"

namespace ttlab {

// Closed triangulated surface stored as 3F darts. Dart 3f+s is side s of face
// f (opposite corner s, from corner s+1 to corner s+2), so next(3f+s) is
// 3f+(s+1)%3. Corner 3f+c carries a vertex class. Multi-edges and loops are
// allowed.
class Triangulation2D {
 public:
  Triangulation2D() = default;
  // Vertex classes from the rotation system of `twin`.
  explicit Triangulation2D(std::vector<int> twin);
  // Vertex classes supplied; must agree with the rotation system.
  Triangulation2D(std::vector<int> twin, std::vector<int> corner_vertex);

  int num_faces() const noexcept { return static_cast<int>(twin_.size() / 3); }
  int num_darts() const noexcept { return static_cast<int>(twin_.size()); }
  int num_edges() const noexcept { return num_darts() / 2; }
  int num_vertices() const noexcept { return num_vertices_; }
  int euler_characteristic() const noexcept { return num_vertices_ - num_edges() + num_faces(); }
  bool is_connected() const;
  bool is_planar() const { return euler_characteristic() == 2 && is_connected(); }

  int twin(int d) const { return twin_[d]; }
  static int next(int d) { return 3 * (d / 3) + (d % 3 + 1) % 3; }
  static int prev(int d) { return 3 * (d / 3) + (d % 3 + 2) % 3; }
  static int face(int d) { return d / 3; }
  int vertex(int corner) const { return corner_vertex_[corner]; }
  int origin(int d) const { return corner_vertex_[tail_corner(d)]; }
  int target(int d) const { return corner_vertex_[head_corner(d)]; }
  std::array<int, 3> face_vertices(int f) const {
    return {corner_vertex_[3 * f], corner_vertex_[3 * f + 1], corner_vertex_[3 * f + 2]};
  }
  std::span<const int> twins() const noexcept { return twin_; }
  std::span<const int> corner_vertices() const noexcept { return corner_vertex_; }

  // Distinguished edge set, closed under twin.
  bool distinguished(int d) const { return !e0_.empty() && e0_[d] != 0; }
  void set_distinguished(std::span<const int> darts);
  std::vector<int> distinguished_darts() const;
  int root() const noexcept { return root_; }
  void set_root(int d);

  // Rows "dart,twin,next,vertex".
  std::string dart_csv() const;

  friend bool operator==(const Triangulation2D&, const Triangulation2D&) = default;

 private:
  std::vector<int> twin_;
  std::vector<int> corner_vertex_;
  std::vector<char> e0_;
  int num_vertices_ = 0;
  int root_ = -1;
};

// Corner vertex labels of the rotation system, dense in corner order.
std::vector<int> rotation_vertex_classes(std::span<const int> twin);

// Closes t by gluing boundary edge i to edge pi(i), heads to tails. Darts are
// the slots of t; E0 is the set of boundary darts and the root is edge 0.
Triangulation2D glue(const OuterplanarTriangulation& t, std::span<const int> pi);

// Inverse of glue: cuts a closed triangulation open along its distinguished
// edges, which must form a spanning tree containing the root.
struct Unglued {
  OuterplanarTriangulation t;
  std::vector<int> pi;
  std::vector<int> face_to_triangle;  // face of the input -> triangle of t
  std::vector<int> face_rotation;     // corner k of the triangle is corner (k+r)%3 of the face
  std::vector<int> boundary_dart;     // boundary label -> dart of the input
};
Unglued unglue(const Triangulation2D& tri);

// Involution on faces pairing each face with the unique other face carrying
// the same three distinct vertex classes.
struct TrianglePairing {
  std::vector<int> partner;
};
std::optional<TrianglePairing> companion_pairing(const Triangulation2D& tri);

bool is_hierarchical(const Triangulation2D& tri);
// Hierarchical with every distinguished edge shared by two companions.
bool is_in_H(const OuterplanarTriangulation& t, std::span<const int> pi);
// Same membership, tested by searching for parallel edges instead.
bool is_in_H_direct(const OuterplanarTriangulation& t, std::span<const int> pi);

// Stacking history of an Apollonian triangulation. Faces 0..F-1 are the input
// faces (vertex triples); each peel of a degree-3 vertex retires three faces
// and appends their union as a new face.
struct PeelStep {
  int vertex;
  std::array<int, 3> star;  // faces (vertex, a, b), (vertex, b, c), (vertex, c, a)
  int created;              // face (a, b, c)
};
struct PeelLog {
  std::vector<std::array<int, 3>> faces;
  std::vector<PeelStep> steps;
  std::array<int, 2> last{-1, -1};  // the final double triangle
};
std::optional<PeelLog> peel_stacked(std::span<const std::array<int, 3>> faces, int num_vertices);
bool is_apollonian(const Triangulation2D& tri);
bool is_in_A(const OuterplanarTriangulation& t, std::span<const int> pi);

enum class Rejection {
  None,
  SizeMismatch,
  NotHierarchical,
  TreeEdgeIn2Cycle,
  NotApollonian,
};
const char* to_string(Rejection r);

struct TripleTree {
  OuterplanarTriangulation t;
  NonCrossingPairing pi_h;
  NonCrossingPairing pi_a;
  int loops = 0;

  int n() const noexcept { return t.n(); }
  friend bool operator==(const TripleTree& a, const TripleTree& b) {
    return a.t == b.t && a.pi_h == b.pi_h && a.pi_a == b.pi_a;
  }
};

struct Validation {
  std::optional<TripleTree> tree;
  Rejection reason = Rejection::None;
  explicit operator bool() const noexcept { return tree.has_value(); }
};
Validation validate_triple(const OuterplanarTriangulation& t, const NonCrossingPairing& pi_h,
                           const NonCrossingPairing& pi_a);
// Throws Error(InvariantViolation) with the rejection reason.
TripleTree make_triple(const OuterplanarTriangulation& t, const NonCrossingPairing& pi_h,
                       const NonCrossingPairing& pi_a);

}  // namespace ttlab
