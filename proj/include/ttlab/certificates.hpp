#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttlab/complexes.hpp"

namespace ttlab {

// Shapes of an admissible pair (A, B) glued along their only shared
// non-distinguished edge. The two other edge pairs (matched at the endpoints
// of that edge) are each plain (N), distinguished (E) or distinguished and
// already shared by A and B (Es):
//   A: N,N   B: N,E   C: E,E   D: N,Es   E: E,Es   F: Es,Es
//   G: E,E with one edge of A shared with the unmatched edge of B
//   H: E,E with both edges crosswise shared (a two-triangle component)
// Forbidden marks pairs that obey the gluing rule but share more than one
// non-distinguished edge; they cannot occur while E_s stays spanning.
enum class PairCase { A, B, C, D, E, F, G, H, Forbidden };
char to_char(PairCase c);

struct PairClass {
  bool adjacent = false;
  int sigma = -1;                // dart of the first face on the glued edge
  std::optional<PairCase> tag;   // set iff the pair obeys the avoidance rule
};

// The boundary of a partially glued tree of tetrahedra. Faces and darts keep
// their base ids; gluing two faces removes them and reattaches neighbours.
class BoundarySurface {
 public:
  BoundarySurface() = default;
  // An empty distinguished set disables avoidance.
  explicit BoundarySurface(const Triangulation2D& base, std::span<const int> distinguished = {});

  int num_faces() const noexcept { return static_cast<int>(alive_.size()); }
  bool alive(int f) const { return alive_[f] != 0; }
  int live_faces() const noexcept { return live_; }
  int twin(int d) const { return twin_[d]; }
  bool distinguished(int d) const { return !dist_.empty() && dist_[d] != 0; }
  bool avoiding() const noexcept { return !dist_.empty(); }

  PairClass classify(int a, int b) const;

  struct Fold {
    int a = -1, b = -1;
    int sigma_a = -1, sigma_b = -1;         // darts of the glued edge
    std::array<std::array<int, 2>, 3> corners{};  // (corner of a, corner of b), global corner ids
  };
  // Glues a onto b along dart sigma of a (whose twin must lie in b).
  Fold glue(int a, int b, int sigma);

 private:
  std::vector<int> twin_;
  std::vector<char> dist_;
  std::vector<char> alive_;
  int live_ = 0;
};

struct AdmissiblePair {
  int a = -1, b = -1;
  int sigma = -1;
  PairCase tag = PairCase::A;
};
// Every admissible pair of live faces (a < b), forbidden shapes excluded.
std::vector<AdmissiblePair> admissible_pairs(const BoundarySurface& s);
std::vector<AdmissiblePair> admissible_pairs(const Triangulation2D& boundary);

struct LcStep {
  int a = -1, b = -1;
  int sigma = -1;  // slot 0..2 of face a
  PairCase tag = PairCase::A;
  friend bool operator==(const LcStep& x, const LcStep& y) {
    return x.a == y.a && x.b == y.b && x.sigma == y.sigma;
  }
};

struct LocalConstruction {
  TreeOfTetrahedra base;
  std::vector<LcStep> steps;
  std::vector<int> avoided;  // darts of the base boundary; empty for a plain construction
  RootCorner root;
};

enum class LcError { None, DeadTriangle, NonAdjacentPair, InadmissibleStep, NonEmptyBoundary };
const char* to_string(LcError e);

struct LcReplay {
  std::optional<Triangulation3D> T;
  LcError error = LcError::None;
  int step = -1;                    // failing step
  std::vector<PairCase> tags;       // per step, when avoiding
  std::vector<int> sigma_edges;     // edge class of T removed at each step
  std::vector<int> sigma_b;         // dart of b on the glued edge, per step
  int forbidden = 0;                // forbidden pairs seen on the boundary before each step
  explicit operator bool() const noexcept { return T.has_value(); }
};
// Glues the steps in order. With `avoid`, each step must be admissible with
// respect to lc.avoided. E of the result is the set of edges never glued along.
LcReplay run_local_construction(const LocalConstruction& lc, bool avoid = true);

// Order in which free edges are chosen.
enum class PeelOrder { Lowest, Highest, Random };

struct CollapseStep {
  int edge = -1;
  int triangle = -1;
  friend bool operator==(const CollapseStep&, const CollapseStep&) = default;
};
struct CollapsingSequence {
  std::vector<CollapseStep> steps;
};

// Elementary collapses of free edges outside `keep` until no triangle is
// left; nullopt when stuck.
std::optional<CollapsingSequence> collapse_onto(const EmbeddedComplex2& c, std::span<const int> keep,
                                                PeelOrder order = PeelOrder::Lowest, std::uint64_t seed = 0);
// Throws InvalidArgument unless e_prime is a spanning tree of free edges.
CollapsingSequence collapse_tree_of_triangles(const EmbeddedComplex2& c, std::span<const int> e_prime,
                                              PeelOrder order = PeelOrder::Lowest, std::uint64_t seed = 0);
// Empty when the sequence collapses c onto a spanning tree; else the reason.
std::optional<std::string> check_collapse(const EmbeddedComplex2& c, const CollapsingSequence& cs);

struct LcCollapse {
  EmbeddedComplex2 complex;  // T^{T0}: pi_c from the base boundary, pi_t from the folds
  CollapsingSequence sequence;
};
LcCollapse lc_to_collapse(const LocalConstruction& lc);
// Throws InvalidArgument on a malformed sequence.
LocalConstruction collapse_to_lc(const TreeOfTetrahedra& base, const EmbeddedComplex2& complex,
                                 const CollapsingSequence& cs, std::vector<int> avoided, RootCorner root);

// Base tree of tetrahedra of (T, T0), faces in tree_complex order.
TreeOfTetrahedra base_tree(const Triangulation3D& T, const TreeComplex& tc);

// Greedy certificate: collapse T^{T0} cut along E onto Cut(E).
std::optional<LocalConstruction> find_tree_avoiding_lc(const Triangulation3D& T, PeelOrder order = PeelOrder::Lowest,
                                                       std::uint64_t seed = 0);
// Exhaustive search over admissible gluing orders, independent of the
// membership test. Meant for a handful of tetrahedra.
std::optional<LocalConstruction> search_tree_avoiding_lc(const Triangulation3D& T);

bool is_spanning_tree_of(const Triangulation2D& surface, std::span<const int> darts);

// Reduction sequences on the outerplanar triangulation t0 = cut of the base
// boundary along the avoided tree.
struct ReductionSequence {
  OuterplanarTriangulation t0;
  std::vector<int> pairing;                 // triangle -> partner
  std::vector<std::array<int, 2>> order;    // pairs in gluing order
};

// The map t_s: triangles of t0 with their current adjacencies.
class ReductionState {
 public:
  explicit ReductionState(const OuterplanarTriangulation& t0);
  bool alive(int f) const { return alive_[f] != 0; }
  // Admissible on t_s: one shared inner edge, matched sides both outer or both inner.
  std::optional<int> admissible(int a, int b) const;  // slot of a on the shared edge
  // Performs the fold; returns the matched side pairs (slot of a, slot of b).
  std::array<std::array<int, 2>, 3> apply(int a, int b, int slot);

 private:
  std::vector<int> twin_;
  std::vector<char> alive_;
};

bool reduction_sequence_check(const ReductionSequence& rs);
// Pairs the outer edges matched at each fold; nullopt on an invalid sequence.
std::optional<NonCrossingPairing> pi_h_from_reduction(const ReductionSequence& rs);
// The reduction sequence induced by a tree-avoiding construction.
struct InducedReduction {
  ReductionSequence sequence;
  Unglued cut;  // t0 with face correspondence to the base boundary
};
InducedReduction reduction_from_lc(const LocalConstruction& lc);

// Converse of the reduction correspondence, checked by exhaustion at size n: every
// reduction sequence on every t0 with every Apollonian pairing pi_a is
// replayed as a gluing of the stacked ball of Glue(t0, pi_a).
struct ConverseReport {
  int n = 0;
  std::int64_t bases = 0;         // (t0, pi_a) pairs
  std::int64_t sequences = 0;     // valid reduction sequences
  std::int64_t talc = 0;          // replay as tree-avoiding constructions
  std::int64_t hierarchical = 0;  // induced pairing glues to a hierarchical map
  std::int64_t members = 0;       // replayed triangulation passes membership
};
ConverseReport reduction_converse_report(int n);

// Simplex ids of a closed 3D triangulation: vertex and edge classes, one
// triangle per glued face pair (numbered from the smaller side), tetrahedra.
struct SimplexIndex {
  std::array<int, 4> count{};
  std::vector<int> triangle_of;                  // 4*tet+face -> triangle
  std::vector<std::array<int, 2>> triangle_rep;  // triangle -> (tet, face)
  std::vector<std::array<int, 2>> edge_ends;     // edge -> vertex classes
  std::vector<std::array<int, 3>> triangle_edges;
  std::vector<std::array<int, 4>> tet_triangles;
  explicit SimplexIndex(const Triangulation3D& T);
  int triangle(int tet, int face) const { return triangle_of[4 * tet + face]; }
  // Facets of a cell of dimension dim >= 1, with multiplicity.
  std::vector<int> facets(int dim, int cell) const;
};

struct DiscreteVectorField {
  struct Pair {
    int dim = 0;  // dimension of `cell`
    int cell = -1;
    int cofacet = -1;
    friend auto operator<=>(const Pair&, const Pair&) = default;
  };
  std::vector<Pair> pairs;  // sorted
  std::array<std::vector<int>, 4> critical;
  std::vector<Pair> layer(int dim) const;
};

// Full gradient: folds pair glued edges with their triangles, E points to the
// root vertex, the dual tree of T0 points to the root tetrahedron.
DiscreteVectorField morse_from_lc(const LocalConstruction& lc);
bool is_valid_field(const Triangulation3D& T, const DiscreteVectorField& f);
bool is_acyclic(const Triangulation3D& T, const DiscreteVectorField& f);
// Gradient on a 2-complex whose critical cells are the vertices and the edges
// of e: greedy free-edge peeling under several orders, which must agree.
// Dimension-1 pairs (edge, complex triangle); nullopt when none exists.
// Throws InvalidArgument unless e is a spanning tree.
std::optional<DiscreteVectorField> morse_uniqueness(const EmbeddedComplex2& c, std::span<const int> e);

// Complex ids of tree_complex(T) in terms of SimplexIndex ids of T.
struct TreeComplexIds {
  std::vector<int> edge;      // complex edge -> edge class of T
  std::vector<int> triangle;  // complex triangle -> triangle of T
};
TreeComplexIds tree_complex_ids(const Triangulation3D& T, const TreeComplex& tc, const SimplexIndex& ix);

}  // namespace ttlab
