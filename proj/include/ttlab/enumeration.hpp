#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ttlab/planar_maps.hpp"
#include "ttlab/series.hpp"

namespace ttlab {

// All pairings of size n with their boundary-vertex classes under Glue and
// the loop counts of every pair.
class PairingTable {
 public:
  explicit PairingTable(int n);
  int n() const noexcept { return n_; }
  int size() const noexcept { return static_cast<int>(pairings_.size()); }
  const NonCrossingPairing& pairing(int p) const { return pairings_[p]; }
  // Vertex class of boundary vertex v in Glue(·, pairing p).
  int vertex_class(int p, int v) const { return classes_[p * 2 * n_ + v]; }
  int loops(int p, int q) const { return loops_[p * size() + q]; }
  int index_of(const NonCrossingPairing& p) const;

 private:
  int n_;
  std::vector<NonCrossingPairing> pairings_;
  std::vector<int> classes_;
  std::vector<std::uint8_t> loops_;
};

struct RejectionCounts {
  std::map<Rejection, std::int64_t> hierarchical;  // over (t, pi) pairs
  std::map<Rejection, std::int64_t> apollonian;
  RejectionCounts& operator+=(const RejectionCounts& o);
};

// Indices of the pairings pi with Glue(t, pi) in H_n and in A_n. Works on
// boundary-vertex classes directly rather than building the glued map.
struct Candidates {
  std::vector<int> h, a;
};
Candidates candidates(const OuterplanarTriangulation& t, const PairingTable& table,
                      RejectionCounts* counts = nullptr);

struct EnumerationOptions {
  int max_n = 7;          // sizes above this throw Cap unless extended
  bool extended = false;  // allows n = 8
  int jobs = 1;
  std::function<void(std::int64_t done, std::int64_t total)> progress;
};

struct EnumerationReport {
  int n = 0;
  BivariatePolynomial m;  // terms z^n x^N
  std::int64_t outerplanar = 0;
  std::int64_t h_candidates = 0;  // sum over t of |H(t)|
  std::int64_t a_candidates = 0;
  std::map<std::pair<int, int>, std::int64_t> candidate_histogram;  // (|H(t)|, |A(t)|) -> #t
  RejectionCounts rejections;
  double seconds = 0;
  mpz_class total() const { return m.slice_sum(n); }
};
EnumerationReport enumerate_Mn(int n, const EnumerationOptions& opts = {});

// Every triple tree of size n, grouped by t in word order.
void for_each_triple_tree(int n, const std::function<void(const TripleTree&)>& fn);
std::vector<TripleTree> enumerate_triple_trees(int n);

// Generating functions.
mpz_class hierarchical_count(int n);
TruncatedSeries h_series(int order);         // (1 - sqrt(1 - 12z)) / 3
TruncatedSeries h_system_series(int order);  // from the H1/H2 decomposition
struct ApollonianSeries {
  TruncatedSeries a1, a2, a3, a;
};
ApollonianSeries apollonian_series(int order);
// Left side of the degree-6 relation satisfied by A3, truncated.
TruncatedSeries apollonian_relation_residual(const TruncatedSeries& a3);
double apollonian_growth_constant(double tolerance = 1e-9);

// Counts of the special subdivision class at size 2k+2.
mpz_class special_class_count(int k);

struct BoundsReport {
  int n = 0;
  mpz_class total;        // M_n(1)
  mpz_class upper;        // |H_n| Cat(n)
  bool upper_ok = false;
  std::optional<int> k;   // set when n = 2k+2
  mpz_class top_coefficient;  // coefficient of x^{k+2}
  mpz_class special;          // special_class_count(k)
  bool lower_ok = true;
};
BoundsReport bounds_report(const EnumerationReport& r);

// The same triple with the root moved to boundary edge `shift`.
TripleTree rotate_root(const TripleTree& tt, int shift);

// A subdivision site: a face of t and one of its corners; the companion
// face and its corner of the same hierarchical class complete the choice.
struct SubdivisionChoice {
  int triangle = -1;
  int corner = -1;
  friend bool operator==(const SubdivisionChoice&, const SubdivisionChoice&) = default;
};
// The 3n-3 choices, one per companion pair and shared vertex class.
std::vector<SubdivisionChoice> subdivision_choices(const TripleTree& tt);
TripleTree special_subdivide(const TripleTree& tt, SubdivisionChoice choice);
// Inverse at the site whose first new boundary edge is `position`; nullopt
// when no subdivision pattern sits there.
struct Shrink {
  TripleTree tree;
  SubdivisionChoice choice;
};
std::optional<Shrink> special_shrink(const TripleTree& tt, int position);

// Level k of the special class (size 2k+2): the two size-2 trees closed
// under subdivision and rerooting. Sorted, without repeats.
std::vector<TripleTree> special_class(int k);

}  // namespace ttlab
