#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ttlab/certificates.hpp"
#include "ttlab/enumeration.hpp"
#include "ttlab/sampler.hpp"

namespace ttlab {

// Every document carries this version: JSON as the "format" member, CSV as a
// leading "# ttlab/1" comment line. Readers refuse other versions.
inline constexpr std::string_view kFormat = "ttlab/1";

// CSV preamble: the version line, then one "# key=value" line per entry.
std::string csv_preamble(const std::vector<std::pair<std::string, std::string>>& meta = {});

// {"format", "n", "t", "pi_h", "pi_a", "loops"}; t is the dual-tree word.
std::string triple_to_json(const TripleTree& tt);
// Throws Parse on malformed input, InvalidArgument on a bad pairing, and
// NotHierarchical / NotApollonian / SizeMismatch when validate_triple refuses
// it. A "loops" member, when present, must match.
TripleTree triple_from_json(std::string_view text);

std::string pairing_to_json(const NonCrossingPairing& p);  // {"format", "partner"}
std::string outerplanar_to_json(const OuterplanarTriangulation& t);  // {"format", "n", "t"}

// Face-gluing table of a closed triangulation:
//   "gluing": per tetrahedron, per face f = 0..3, [target, target_face, [p0, p1, p2]]
//             with p_i the image of the i-th smallest local vertex other than
//             f; f itself goes to target_face
//   "t0":     dual tree faces [tet, face], one side each
//   "e":      edge tree as representatives [tet, a, b], local vertices a < b,
//             first occurrence in (tet, a, b) order
//   "root":   {"tet", "face", "u", "v"}
// Decoding throws Parse on any malformed, inconsistent or unglued entry.
std::string triangulation_to_json(const Triangulation3D& T);
Triangulation3D triangulation_from_json(std::string_view text);
// True when the document is a face-gluing table rather than a triple tree.
bool is_triangulation_json(std::string_view text);

// Certificate: the base tree of tetrahedra (internal gluings and boundary
// faces), the avoided darts of its boundary, the root and the ordered steps
// [a, b, sigma, case].
std::string certificate_to_json(const LocalConstruction& lc);
LocalConstruction certificate_from_json(std::string_view text);
// Gradient: pairs [dim, cell, cofacet] and the critical cells by dimension.
std::string gradient_to_json(const DiscreteVectorField& f);
// Both under one document, as written by the certify command.
std::string certify_to_json(const LocalConstruction& lc, const DiscreteVectorField& f);

// Rows (n, x_power, count), zero coefficients omitted.
std::string coefficients_csv(const std::vector<EnumerationReport>& reports);
// Rows (k, coefficient) for k = 1..order; non-integers as p/q.
std::string series_csv(const TruncatedSeries& s, int order, std::string_view family);
// Rows (index, t, pi_h, pi_a, loops); pairings space-separated.
std::string catalog_csv(int n, const std::vector<TripleTree>& trees);

// Rows (n, N, visits, log_f) from production; seed and run parameters in the
// preamble.
std::string histogram_csv(const ChainResult& r);
struct ExactComparison {
  std::map<int, double> ratio;  // M_n / M_{previous visited size} from the table
  ChiSquare chi;
};
std::string summary_json(const ChainResult& r, const std::optional<ExactComparison>& exact = std::nullopt);

std::string read_text(const std::string& path);  // "-" reads stdin; throws Parse when unreadable
void write_text(const std::string& path, std::string_view text);  // "-" writes stdout

}  // namespace ttlab
