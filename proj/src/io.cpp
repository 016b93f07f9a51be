#include "ttlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <json.hpp>

namespace ttlab {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string joined(std::span<const int> v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

std::string dumped(Json j) {
  Json doc;
  doc["format"] = kFormat;
  for (auto& [k, v] : j.items()) doc[k] = std::move(v);
  return doc.dump() + "\n";
}

Json document(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) parse_error("document is not a JSON object");
  if (!j.contains("format") || !j["format"].is_string() || j["format"].get<std::string>() != kFormat) {
    parse_error("missing or unsupported format version");
  }
  return j;
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_error(std::string("missing member \"") + key + "\"");
  return j[key];
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) parse_error(std::string(what) + " is not an integer");
  const auto v = j.get<std::int64_t>();
  if (v < -1'000'000'000 || v > 1'000'000'000) parse_error(std::string(what) + " out of range");
  return static_cast<int>(v);
}

int index(const Json& j, int bound, const char* what) {
  const int v = integer(j, what);
  if (v < 0 || v >= bound) parse_error(std::string(what) + " out of range");
  return v;
}

const Json& array(const Json& j, const char* what, std::optional<std::size_t> size = std::nullopt) {
  if (!j.is_array()) parse_error(std::string(what) + " is not an array");
  if (size && j.size() != *size) parse_error(std::string(what) + " has the wrong length");
  return j;
}

std::vector<int> integers(const Json& j, const char* what) {
  std::vector<int> out;
  for (const auto& v : array(j, what)) out.push_back(integer(v, what));
  return out;
}

// Face f of a tetrahedron: [target, target_face, images of the other three
// local vertices in increasing order].
Json gluing_entry(int face, const FaceGluing& g) {
  Json images = Json::array();
  for (int v = 0; v < 4; ++v) {
    if (v != face) images.push_back(g.perm[v]);
  }
  return Json::array({g.tet, g.face, images});
}

FaceGluing read_gluing(const Json& j, int face, int tets) {
  array(j, "gluing entry", 3);
  FaceGluing g;
  g.tet = index(j[0], tets, "gluing target");
  g.face = index(j[1], 4, "gluing target face");
  const Json& images = array(j[2], "gluing permutation", 3);
  int i = 0;
  for (int v = 0; v < 4; ++v) g.perm[v] = v == face ? g.face : index(images[i++], 4, "permutation image");
  std::array<int, 4> sorted = g.perm;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 4>{0, 1, 2, 3}) parse_error("gluing permutation is not a bijection");
  return g;
}

Json root_json(const RootCorner& r) { return Json{{"tet", r.tet}, {"face", r.face}, {"u", r.u}, {"v", r.v}}; }

RootCorner read_root(const Json& j, int tets) {
  if (!j.is_object()) parse_error("root is not an object");
  return {index(member(j, "tet"), tets, "root tetrahedron"), index(member(j, "face"), 4, "root face"),
          index(member(j, "u"), 4, "root vertex"), index(member(j, "v"), 4, "root vertex")};
}

Json triangulation_body(const Triangulation3D& T) {
  Json gluing = Json::array();
  for (int k = 0; k < T.num_tetrahedra(); ++k) {
    Json faces = Json::array();
    for (int f = 0; f < 4; ++f) {
      const FaceGluing& g = T.gluing(k, f);
      if (!g.glued()) throw Error(ErrorCode::InvalidArgument, "only closed triangulations are exported");
      faces.push_back(gluing_entry(f, g));
    }
    gluing.push_back(std::move(faces));
  }
  Json t0 = Json::array();
  for (const auto& [k, f] : T.tree_faces()) t0.push_back(Json::array({k, f}));
  std::map<int, std::array<int, 3>> rep;
  for (int k = 0; k < T.num_tetrahedra(); ++k) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) rep.try_emplace(T.edge_class(k, a, b), std::array<int, 3>{k, a, b});
    }
  }
  Json e = Json::array();
  for (const int c : T.edge_tree()) {
    const auto& r = rep.at(c);
    e.push_back(Json::array({r[0], r[1], r[2]}));
  }
  return Json{{"gluing", gluing}, {"t0", t0}, {"e", e}, {"root", root_json(T.root())}};
}

Json tree_body(const TreeOfTetrahedra& tree) {
  Json gluing = Json::array();
  for (const auto& faces : tree.gluing) {
    Json row = Json::array();
    for (int f = 0; f < 4; ++f) row.push_back(faces[f].glued() ? gluing_entry(f, faces[f]) : Json(nullptr));
    gluing.push_back(std::move(row));
  }
  Json boundary = Json::array();
  for (const auto& b : tree.boundary) {
    boundary.push_back(Json::array({b.tet, b.face, Json::array({b.local[0], b.local[1], b.local[2]})}));
  }
  return Json{{"gluing", gluing}, {"boundary", boundary}};
}

Json certificate_body(const LocalConstruction& lc) {
  Json steps = Json::array();
  for (const auto& s : lc.steps) steps.push_back(Json::array({s.a, s.b, s.sigma, std::string(1, to_char(s.tag))}));
  return Json{{"base", tree_body(lc.base)}, {"avoided", lc.avoided}, {"root", root_json(lc.root)}, {"steps", steps}};
}

Json gradient_body(const DiscreteVectorField& f) {
  Json pairs = Json::array();
  for (const auto& p : f.pairs) pairs.push_back(Json::array({p.dim, p.cell, p.cofacet}));
  Json critical = Json::array();
  for (const auto& c : f.critical) critical.push_back(c);
  return Json{{"pairs", pairs}, {"critical", critical}};
}

ErrorCode code_of(Rejection r) {
  switch (r) {
    case Rejection::SizeMismatch: return ErrorCode::SizeMismatch;
    case Rejection::NotApollonian: return ErrorCode::NotApollonian;
    default: return ErrorCode::NotHierarchical;
  }
}

}  // namespace

std::string csv_preamble(const std::vector<std::pair<std::string, std::string>>& meta) {
  std::string out = "# " + std::string(kFormat) + "\n";
  for (const auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  return out;
}

std::string triple_to_json(const TripleTree& tt) {
  return dumped(Json{{"n", tt.n()},
                     {"t", tt.t.word()},
                     {"pi_h", tt.pi_h.partner()},
                     {"pi_a", tt.pi_a.partner()},
                     {"loops", tt.loops}});
}

TripleTree triple_from_json(std::string_view text) {
  const Json j = document(text);
  const int n = integer(member(j, "n"), "n");
  if (n < 2) parse_error("n must be at least 2");
  const Json& word = member(j, "t");
  if (!word.is_string()) parse_error("t is not a string");
  const OuterplanarTriangulation t = [&] {
    try {
      return OuterplanarTriangulation::from_word(n, word.get<std::string>());
    } catch (const Error& e) {
      parse_error(std::string("bad dual-tree word: ") + e.what());
    }
  }();
  const NonCrossingPairing pi_h(integers(member(j, "pi_h"), "pi_h"));
  const NonCrossingPairing pi_a(integers(member(j, "pi_a"), "pi_a"));
  Validation v = validate_triple(t, pi_h, pi_a);
  if (!v) throw Error(code_of(v.reason), std::string("not a triple tree: ") + to_string(v.reason));
  if (j.contains("loops") && integer(j["loops"], "loops") != v.tree->loops) {
    throw Error(ErrorCode::InvalidArgument, "recorded loop count does not match");
  }
  return std::move(*v.tree);
}

std::string pairing_to_json(const NonCrossingPairing& p) { return dumped(Json{{"partner", p.partner()}}); }

std::string outerplanar_to_json(const OuterplanarTriangulation& t) {
  return dumped(Json{{"n", t.n()}, {"t", t.word()}});
}

std::string triangulation_to_json(const Triangulation3D& T) { return dumped(triangulation_body(T)); }

bool is_triangulation_json(std::string_view text) { return document(text).contains("gluing"); }

Triangulation3D triangulation_from_json(std::string_view text) {
  const Json j = document(text);
  const Json& gluing = array(member(j, "gluing"), "gluing");
  const int tets = static_cast<int>(gluing.size());
  if (tets == 0) parse_error("no tetrahedra");
  Triangulation3D T(tets);
  for (int k = 0; k < tets; ++k) {
    const Json& faces = array(gluing[k], "tetrahedron", 4);
    for (int f = 0; f < 4; ++f) {
      if (faces[f].is_null()) parse_error("face " + std::to_string(f) + " of tetrahedron " + std::to_string(k) +
                                          " is not glued");
      const FaceGluing g = read_gluing(faces[f], f, tets);
      if (g.tet == k && g.face == f) parse_error("face glued to itself");
      if (std::pair(g.tet, g.face) < std::pair(k, f)) {
        const FaceGluing& seen = T.gluing(k, f);
        if (seen.tet != g.tet || seen.face != g.face || seen.perm != g.perm) {
          parse_error("gluing of tetrahedron " + std::to_string(k) + " face " + std::to_string(f) +
                      " disagrees with its partner");
        }
        continue;
      }
      try {
        T.glue(k, f, g.tet, g.face, g.perm);
      } catch (const Error& e) {
        parse_error("tetrahedron " + std::to_string(k) + " face " + std::to_string(f) + ": " + e.what());
      }
    }
  }
  std::vector<std::array<int, 2>> t0;
  for (const auto& face : array(member(j, "t0"), "t0")) {
    array(face, "t0 face", 2);
    t0.push_back({index(face[0], tets, "t0 tetrahedron"), index(face[1], 4, "t0 face")});
  }
  T.set_tree(t0);
  std::vector<int> e;
  for (const auto& edge : array(member(j, "e"), "e")) {
    array(edge, "e edge", 3);
    const int k = index(edge[0], tets, "e tetrahedron");
    const int a = index(edge[1], 4, "e vertex"), b = index(edge[2], 4, "e vertex");
    if (a == b) parse_error("e edge with equal ends");
    e.push_back(T.edge_class(k, a, b));
  }
  T.set_edge_tree(std::move(e));
  T.set_root(read_root(member(j, "root"), tets));
  return T;
}

std::string certificate_to_json(const LocalConstruction& lc) { return dumped(certificate_body(lc)); }

LocalConstruction certificate_from_json(std::string_view text) {
  Json j = document(text);
  if (j.contains("certificate")) j = j["certificate"];
  LocalConstruction lc;
  const Json& base = member(j, "base");
  const Json& gluing = array(member(base, "gluing"), "base gluing");
  const int tets = static_cast<int>(gluing.size());
  lc.base.gluing.resize(tets);
  for (int k = 0; k < tets; ++k) {
    const Json& faces = array(gluing[k], "base tetrahedron", 4);
    for (int f = 0; f < 4; ++f) {
      if (!faces[f].is_null()) lc.base.gluing[k][f] = read_gluing(faces[f], f, tets);
    }
  }
  for (const auto& b : array(member(base, "boundary"), "boundary")) {
    array(b, "boundary face", 3);
    const Json& local = array(b[2], "boundary corners", 3);
    lc.base.boundary.push_back({index(b[0], tets, "boundary tetrahedron"), index(b[1], 4, "boundary face"),
                                {index(local[0], 4, "corner"), index(local[1], 4, "corner"),
                                 index(local[2], 4, "corner")}});
  }
  const int faces = static_cast<int>(lc.base.boundary.size());
  for (const auto& d : array(member(j, "avoided"), "avoided")) lc.avoided.push_back(index(d, 3 * faces, "dart"));
  lc.root = read_root(member(j, "root"), tets);
  for (const auto& s : array(member(j, "steps"), "steps")) {
    array(s, "step", 4);
    LcStep step{index(s[0], faces, "step face"), index(s[1], faces, "step face"), index(s[2], 3, "step slot")};
    if (!s[3].is_string() || s[3].get<std::string>().size() != 1) parse_error("step case is not a letter");
    const char tag = s[3].get<std::string>()[0];
    bool known = false;
    for (int c = 0; c <= static_cast<int>(PairCase::Forbidden); ++c) {
      if (to_char(static_cast<PairCase>(c)) == tag) step.tag = static_cast<PairCase>(c), known = true;
    }
    if (!known) parse_error(std::string("unknown step case ") + tag);
    lc.steps.push_back(step);
  }
  return lc;
}

std::string gradient_to_json(const DiscreteVectorField& f) { return dumped(gradient_body(f)); }

std::string certify_to_json(const LocalConstruction& lc, const DiscreteVectorField& f) {
  return dumped(Json{{"certificate", certificate_body(lc)}, {"gradient", gradient_body(f)}});
}

std::string coefficients_csv(const std::vector<EnumerationReport>& reports) {
  std::string out = csv_preamble() + "n,x_power,count\n";
  for (const auto& r : reports) {
    for (const auto& [power, count] : r.m.slice(r.n)) {
      if (count != 0) out += std::to_string(r.n) + "," + std::to_string(power) + "," + count.get_str() + "\n";
    }
  }
  return out;
}

std::string series_csv(const TruncatedSeries& s, int order, std::string_view family) {
  std::string out = csv_preamble({{"family", std::string(family)}, {"order", std::to_string(order)}});
  out += "k,coefficient\n";
  for (int k = 1; k <= std::min(order, s.order()); ++k) out += std::to_string(k) + "," + s[k].get_str() + "\n";
  return out;
}

std::string catalog_csv(int n, const std::vector<TripleTree>& trees) {
  std::map<int, int> by_loops;
  for (const auto& tt : trees) ++by_loops[tt.loops];
  std::string multiset;
  for (const auto& [loops, count] : by_loops) {
    if (!multiset.empty()) multiset += " ";
    multiset += std::to_string(count) + "x" + std::to_string(loops);
  }
  std::string out = csv_preamble(
      {{"n", std::to_string(n)}, {"entries", std::to_string(trees.size())}, {"loops", multiset}});
  out += "index,t,pi_h,pi_a,loops\n";
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const auto& tt = trees[i];
    out += std::to_string(i) + "," + tt.t.word() + "," + joined(tt.pi_h.partner(), ' ') + "," +
           joined(tt.pi_a.partner(), ' ') + "," + std::to_string(tt.loops) + "\n";
  }
  return out;
}

namespace {

std::vector<std::pair<std::string, std::string>> run_meta(const ChainResult& r) {
  const ChainConfig& c = r.config;
  return {{"seed", std::to_string(c.seed)},
          {"x", number(c.x)},
          {"z", c.z ? number(*c.z) : "tuned"},
          {"window", std::to_string(c.n_min) + "," + std::to_string(c.n_max)},
          {"steps", std::to_string(c.steps)},
          {"tuning_steps", std::to_string(c.log_f.empty() ? c.tuning_steps : 0)},
          {"thinning", std::to_string(r.thinning)}};
}

}  // namespace

std::string histogram_csv(const ChainResult& r) {
  std::string out = csv_preamble(run_meta(r)) + "n,N,visits,log_f\n";
  for (const auto& [cell, visits] : r.visits) {
    const double f = r.log_f.at(cell.first - r.config.n_min);
    out += std::to_string(cell.first) + "," + std::to_string(cell.second) + "," + std::to_string(visits) + "," +
           number(f) + "\n";
  }
  return out;
}

std::string summary_json(const ChainResult& r, const std::optional<ExactComparison>& exact) {
  const ChainConfig& c = r.config;
  Json j;
  j["seed"] = c.seed;
  j["x"] = c.x;
  j["z"] = c.z ? Json(*c.z) : Json(nullptr);
  j["window"] = Json::array({c.n_min, c.n_max});
  j["steps"] = c.steps;
  j["tuning_steps"] = c.log_f.empty() ? c.tuning_steps : 0;
  j["thinning"] = r.thinning;
  j["autocorrelation_time"] = r.autocorrelation_time;
  j["log_f"] = r.log_f;
  Json sizes = Json::array();
  for (const auto& [n, lm] : r.log_m) {
    std::int64_t visits = 0;
    for (const auto& [cell, v] : r.visits) {
      if (cell.first == n) visits += v;
    }
    Json row{{"n", n}, {"visits", visits}, {"distinct", r.distinct.count(n) ? r.distinct.at(n) : 0}, {"log_m", lm}};
    if (const auto it = r.ratio.find(n); it != r.ratio.end()) {
      row["ratio"] = it->second.value;
      row["ratio_error"] = it->second.error;
      if (exact && exact->ratio.count(n)) row["exact_ratio"] = exact->ratio.at(n);
    }
    sizes.push_back(std::move(row));
  }
  j["sizes"] = sizes;
  if (r.z_star) {
    j["z_star"] = Json{{"value", r.z_star->value},
                       {"error", r.z_star->error},
                       {"range", Json::array({r.z_range.first, r.z_range.second})}};
  } else {
    j["z_star"] = nullptr;
  }
  Json moves;
  for (int k = 0; k < kMoveKinds; ++k) {
    const MoveStats& m = r.moves[k];
    moves[to_string(static_cast<MoveKind>(k))] =
        Json{{"proposed", m.proposed}, {"valid", m.valid}, {"accepted", m.accepted}};
  }
  j["moves"] = moves;
  if (exact) {
    j["chi_square"] = Json{{"statistic", exact->chi.statistic}, {"dof", exact->chi.dof}, {"p_value", exact->chi.p_value}};
  }
  Json doc;
  doc["format"] = kFormat;
  for (auto& [k, v] : j.items()) doc[k] = std::move(v);
  return doc.dump(2) + "\n";
}

std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, std::string_view text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
}

}  // namespace ttlab
