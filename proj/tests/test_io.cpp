#include <catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <string>

#include <json.hpp>

#include "ttlab/io.hpp"

using namespace ttlab;
using Json = nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

std::string edited(const std::string& text, const std::function<void(Json&)>& edit) {
  Json j = Json::parse(text);
  edit(j);
  return j.dump();
}

}  // namespace

TEST_CASE("triple trees survive a JSON round trip") {
  for (int n = 2; n <= 5; ++n) {
    for_each_triple_tree(n, [](const TripleTree& tt) {
      const std::string text = triple_to_json(tt);
      const TripleTree back = triple_from_json(text);
      CHECK(back == tt);
      CHECK(back.loops == tt.loops);
      CHECK(triple_to_json(back) == text);
    });
  }
  const TripleTree tt = enumerate_triple_trees(4).front();
  const Json j = Json::parse(triple_to_json(tt));
  CHECK(j["format"] == "ttlab/1");
  CHECK(j["n"] == 4);
  CHECK(j["pi_h"].size() == 8);
}

TEST_CASE("malformed triple documents are parse errors, invalid ones are not") {
  const std::string good = triple_to_json(enumerate_triple_trees(4).front());
  CHECK(code_of([] { triple_from_json("{\"n\": 4"); }) == ErrorCode::Parse);
  CHECK(code_of([] { triple_from_json("[1, 2]"); }) == ErrorCode::Parse);
  CHECK(code_of([&] { triple_from_json(edited(good, [](Json& j) { j["format"] = "ttlab/0"; })); }) ==
        ErrorCode::Parse);
  CHECK(code_of([&] { triple_from_json(edited(good, [](Json& j) { j.erase("pi_a"); })); }) == ErrorCode::Parse);
  CHECK(code_of([&] { triple_from_json(edited(good, [](Json& j) { j["t"] = "(()"; })); }) == ErrorCode::Parse);
  CHECK(code_of([&] { triple_from_json(edited(good, [](Json& j) { j["pi_h"][0] = "a"; })); }) == ErrorCode::Parse);
  // A crossing pairing is a validation failure.
  CHECK(code_of([&] {
          triple_from_json(edited(good, [](Json& j) { j["pi_h"] = {3, 6, 5, 0, 7, 2, 1, 4}; }));
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { triple_from_json(edited(good, [](Json& j) { j["loops"] = 7; })); }) ==
        ErrorCode::InvalidArgument);
  // The same pairing on both sides is never a triple tree.
  const std::string same = edited(good, [&](Json& j) { j["pi_a"] = j["pi_h"]; });
  const ErrorCode c = code_of([&] { triple_from_json(same); });
  CHECK((c == ErrorCode::NotHierarchical || c == ErrorCode::NotApollonian));
}

TEST_CASE("face-gluing tables are bit-exact and keep the decoration") {
  for (int n = 4; n <= 5; ++n) {
    for_each_triple_tree(n, [](const TripleTree& tt) {
      const Triangulation3D T = triple_to_triangulation(tt);
      const std::string text = triangulation_to_json(T);
      CHECK(is_triangulation_json(text));
      const Triangulation3D back = triangulation_from_json(text);
      CHECK(back.canonical_code() == T.canonical_code());
      CHECK(back.root() == T.root());
      CHECK(back.edge_tree() == T.edge_tree());
      CHECK(triangulation_to_json(back) == text);
      CHECK(verify_membership(back).ok());
      CHECK(triangulation_to_triple(back) == tt);
    });
  }
  CHECK_FALSE(is_triangulation_json(triple_to_json(enumerate_triple_trees(4).front())));
}

TEST_CASE("gluing entries follow the documented layout") {
  const Triangulation3D T = triple_to_triangulation(enumerate_triple_trees(4).front());
  const Json j = Json::parse(triangulation_to_json(T));
  REQUIRE(j["gluing"].size() == 2);
  for (int k = 0; k < 2; ++k) {
    for (int f = 0; f < 4; ++f) {
      const Json& e = j["gluing"][k][f];
      const FaceGluing& g = T.gluing(k, f);
      CHECK(e[0] == g.tet);
      CHECK(e[1] == g.face);
      int i = 0;
      for (int v = 0; v < 4; ++v) {
        if (v != f) CHECK(e[2][i++] == g.perm[v]);
      }
    }
  }
  CHECK(j["t0"].size() == 1);
  CHECK(j["e"].size() == static_cast<std::size_t>(T.num_vertices() - 1));
}

TEST_CASE("damaged face-gluing tables") {
  const TripleTree tt = enumerate_triple_trees(5).back();
  const Triangulation3D T = triple_to_triangulation(tt);
  const std::string good = triangulation_to_json(T);
  auto code = [](const std::string& text) { return code_of([&] { triangulation_from_json(text); }); };
  CHECK(code(edited(good, [](Json& j) { j["gluing"][0][1] = nullptr; })) == ErrorCode::Parse);
  CHECK(code(edited(good, [](Json& j) { j["gluing"][0].erase(3); })) == ErrorCode::Parse);
  CHECK(code(edited(good, [](Json& j) { j["gluing"][0][0][2] = {0, 0, 1}; })) == ErrorCode::Parse);
  CHECK(code(edited(good, [](Json& j) { j["gluing"][0][0][0] = 99; })) == ErrorCode::Parse);
  CHECK(code(edited(good, [](Json& j) { j["gluing"][1][2] = j["gluing"][1][3]; })) == ErrorCode::Parse);
  CHECK(code(edited(good, [](Json& j) { j["root"].erase("u"); })) == ErrorCode::Parse);
  CHECK(code(edited(good, [](Json& j) { j["e"].push_back({0, 1, 1}); })) == ErrorCode::Parse);

  // One extra edge in E closes a cycle.
  const Json j = Json::parse(good);
  bool tampered = false;
  for (int a = 0; a < 4 && !tampered; ++a) {
    for (int b = a + 1; b < 4 && !tampered; ++b) {
      if (T.in_edge_tree(T.edge_class(0, a, b))) continue;
      Json bad = j;
      bad["e"].push_back({0, a, b});
      const MembershipReport r = verify_membership(triangulation_from_json(bad.dump()));
      CHECK(r.issue == MembershipIssue::ECycle);
      tampered = true;
    }
  }
  CHECK(tampered);
}

TEST_CASE("certificates replay after a JSON round trip") {
  int checked = 0;
  for_each_triple_tree(5, [&](const TripleTree& tt) {
    const Triangulation3D T = triple_to_triangulation(tt);
    const auto lc = find_tree_avoiding_lc(T);
    REQUIRE(lc);
    const std::string text = certificate_to_json(*lc);
    const LocalConstruction back = certificate_from_json(text);
    CHECK(back.steps == lc->steps);
    CHECK(back.avoided == lc->avoided);
    CHECK(certificate_to_json(back) == text);
    const LcReplay replay = run_local_construction(back);
    REQUIRE(replay);
    CHECK(replay.T->canonical_code() == T.canonical_code());

    const DiscreteVectorField field = morse_from_lc(*lc);
    const Json g = Json::parse(gradient_to_json(field));
    CHECK(g["pairs"].size() == field.pairs.size());
    REQUIRE(g["critical"].size() == 4);
    for (int d = 0; d < 4; ++d) CHECK(g["critical"][d].size() == field.critical[d].size());
    const std::string both = certify_to_json(*lc, field);
    CHECK(certificate_from_json(both).steps == lc->steps);
    ++checked;
  });
  CHECK(checked == 100);
}

TEST_CASE("tabular outputs carry the version line") {
  const std::string coeffs = coefficients_csv({enumerate_Mn(5), enumerate_Mn(3)});
  CHECK(coeffs == "# ttlab/1\nn,x_power,count\n5,1,60\n5,2,40\n");
  const std::string h = series_csv(h_series(3), 3, "H");
  CHECK(h == "# ttlab/1\n# family=H\n# order=3\nk,coefficient\n1,2\n2,6\n3,36\n");
  const std::string cat = catalog_csv(4, enumerate_triple_trees(4));
  CHECK(cat.rfind("# ttlab/1\n# n=4\n# entries=20\n# loops=8x1 12x3\n", 0) == 0);
  CHECK(std::count(cat.begin(), cat.end(), '\n') == 4 + 1 + 20);
}

TEST_CASE("sampler outputs record the seed") {
  ChainConfig c;
  c.n_max = 2;
  c.steps = 2000;
  c.tuning_steps = 1000;
  c.seed = 11;
  const ChainResult r = run_chain(c);
  const std::string csv = histogram_csv(r);
  CHECK(csv.rfind("# ttlab/1\n# seed=11\n", 0) == 0);
  CHECK(csv.find("n,N,visits,log_f\n2,2,2000,0\n") != std::string::npos);
  const Json s = Json::parse(summary_json(r));
  CHECK(s["format"] == "ttlab/1");
  CHECK(s["seed"] == 11);
  CHECK(s["sizes"][0]["visits"] == 2000);
  CHECK(s["z_star"].is_null());
  CHECK(summary_json(r) == summary_json(run_chain(c)));
}
