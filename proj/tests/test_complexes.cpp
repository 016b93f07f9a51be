#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "ttlab/complexes.hpp"
#include "ttlab/enumeration.hpp"
#include "ttlab/meander.hpp"

using namespace ttlab;

namespace {

// Same complex with tetrahedra and local vertices renamed.
Triangulation3D relabel(const Triangulation3D& T, std::mt19937& rng) {
  const int tets = T.num_tetrahedra();
  std::vector<int> sigma(tets);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::shuffle(sigma.begin(), sigma.end(), rng);
  std::vector<std::array<int, 4>> rho(tets);
  for (auto& r : rho) {
    r = {0, 1, 2, 3};
    std::shuffle(r.begin(), r.end(), rng);
  }
  Triangulation3D out(tets);
  for (int k = 0; k < tets; ++k) {
    for (int f = 0; f < 4; ++f) {
      const auto& g = T.gluing(k, f);
      if (std::pair(g.tet, g.face) < std::pair(k, f)) continue;
      std::array<int, 4> perm{};
      for (int v = 0; v < 4; ++v) perm[rho[k][v]] = rho[g.tet][g.perm[v]];
      out.glue(sigma[k], rho[k][f], sigma[g.tet], rho[g.tet][g.face], perm);
    }
  }
  std::vector<std::array<int, 2>> tree;
  for (auto [k, f] : T.tree_faces()) tree.push_back({sigma[k], rho[k][f]});
  out.set_tree(tree);
  std::vector<int> e;
  for (int k = 0; k < tets; ++k) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        if (T.in_edge_tree(T.edge_class(k, a, b))) e.push_back(out.edge_class(sigma[k], rho[k][a], rho[k][b]));
      }
    }
  }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  out.set_edge_tree(e);
  const auto& r = T.root();
  out.set_root({sigma[r.tet], rho[r.tet][r.face], rho[r.tet][r.u], rho[r.tet][r.v]});
  return out;
}

std::vector<int> random_pairing(int n, std::mt19937& rng) {
  // Arbitrary parity-respecting involution, crossings allowed.
  std::vector<int> even, odd;
  for (int i = 0; i < 2 * n; ++i) (i % 2 ? odd : even).push_back(i);
  std::shuffle(odd.begin(), odd.end(), rng);
  std::vector<int> p(2 * n);
  for (int i = 0; i < n; ++i) {
    p[even[i]] = odd[i];
    p[odd[i]] = even[i];
  }
  return p;
}

}  // namespace

TEST_CASE("embedded complex rejects a pi_t that is not a reflection") {
  // Two oriented copies of one triangle; a rotation instead of a reflection.
  std::vector<int> pi_c{5, 4, 3, 2, 1, 0};
  CHECK_NOTHROW(EmbeddedComplex2({3, 5, 4, 0, 2, 1}, pi_c));
  CHECK_THROWS_AS(EmbeddedComplex2({3, 4, 5, 0, 1, 2}, pi_c), Error);
  CHECK_THROWS_AS(EmbeddedComplex2({3, 5, 4, 0, 2}, pi_c), Error);
}

TEST_CASE("a single triangle has three free edges and is a tree of triangles") {
  const EmbeddedComplex2 c({3, 5, 4, 0, 2, 1}, {3, 5, 4, 0, 2, 1});
  CHECK(c.num_triangles() == 1);
  CHECK(c.num_edges() == 3);
  CHECK(c.num_vertices() == 3);
  for (int e = 0; e < 3; ++e) CHECK(c.is_free(e));
  CHECK(c.is_tree_of_triangles());
}

TEST_CASE("spanning tree test") {
  const std::vector<std::pair<int, int>> path{{0, 1}, {1, 2}, {2, 3}};
  const std::vector<std::pair<int, int>> cycle{{0, 1}, {1, 2}, {2, 0}};
  CHECK(is_spanning_tree(4, path));
  CHECK_FALSE(is_spanning_tree(4, cycle));
  CHECK_FALSE(is_spanning_tree(5, path));
  CHECK(is_spanning_tree(1, {}));
}

TEST_CASE("identifying companions of hierarchical gluings") {
  std::mt19937 rng(7);
  for (int n = 2; n <= 5; ++n) {
    const auto pairings = enumerate_pairings(n);
    int members = 0;
    for_each_outerplanar(n, [&](const OuterplanarTriangulation& t) {
      for (const auto& ph : pairings) {
        if (!is_in_H(t, ph.partner())) continue;
        ++members;
        const Triangulation2D h = glue(t, ph.partner());
        const DecoratedComplex d = id_hierarchical(h);
        CHECK(d.complex.num_triangles() == n - 1);
        // Companion slots carry the hierarchical pairing on boundary edges.
        for (int i = 0; i < 2 * n; ++i) {
          CHECK(d.complex.pi_t(t.boundary_slot(i)) == t.boundary_slot(ph[i]));
        }
        // Distinguished edges are glued like E0: each is a free edge.
        CHECK(d.tree_edges.size() == static_cast<std::size_t>(n));
        for (int e : d.tree_edges) CHECK(d.complex.is_free(e));
        CHECK(d.root_slot == t.boundary_slot(0));
        // Splitting recovers the gluing for any other pairing.
        const auto other = random_pairing(n, rng);
        const EmbeddedComplex2 c = id_pi(t, ph.partner(), other);
        CHECK(std::ranges::equal(c.split().twins(), glue(t, other).twins()));
        CHECK(id_pi(t, ph.partner(), ph.partner()) == d.complex);
      }
    });
    CHECK(static_cast<long>(members) == hierarchical_count(n).get_si());
  }
}

TEST_CASE("tree of tetrahedra of an Apollonian gluing") {
  for (int n = 4; n <= 6; ++n) {
    const auto pairings = enumerate_pairings(n);
    int members = 0;
    for_each_outerplanar(n, [&](const OuterplanarTriangulation& t) {
      for (const auto& pa : pairings) {
        if (!is_in_A(t, pa.partner())) continue;
        ++members;
        const Triangulation2D a = glue(t, pa.partner());
        const TreeOfTetrahedra tree = tetra_tree_from_apollonian(a);
        CHECK(tree.num_tetrahedra() == n - 2);
        CHECK(tree.is_tree());
        CHECK(static_cast<int>(tree.boundary.size()) == a.num_faces());
        const Triangulation2D rebuilt = tree_boundary(tree);
        CHECK(std::ranges::equal(rebuilt.twins(), a.twins()));
      }
    });
    CHECK(members > 0);
  }
  CHECK_THROWS_AS(tetra_tree_from_apollonian(Triangulation2D({5, 4, 3, 2, 1, 0})), Error);
}

TEST_CASE("forward map: T is a closed 3-manifold triangulation with the right counts") {
  for (int n = 4; n <= 6; ++n) {
    for_each_triple_tree(n, [&](const TripleTree& tt) {
      const Triangulation3D T = triple_to_triangulation(tt);
      CHECK(T.num_tetrahedra() == n - 2);
      CHECK(T.is_closed());
      CHECK(T.num_vertices() == tt.loops + 1);
      CHECK(T.euler_characteristic() == 0);
      CHECK(static_cast<int>(T.tree_faces().size()) == n - 3);
      // E is a spanning tree of the vertices, one edge per loop, matching the zone tree.
      CHECK(static_cast<int>(T.edge_tree().size()) == tt.loops);
      const auto zt = zone_adjacency_tree(tt.pi_h.partner(), tt.pi_a.partner());
      CHECK(zt.edges.size() == T.edge_tree().size());
      const auto report = verify_membership(T);
      CHECK(report.ok());
      // Boundary of T0 cut along E is t again.
      const TreeComplex tc = tree_complex(T);
      CHECK(unglue(tc.boundary).t == tt.t);
    });
  }
}

TEST_CASE("bijection round trip and distinct canonical codes") {
  std::mt19937 rng(11);
  for (int n = 4; n <= 6; ++n) {
    std::set<std::vector<int>> codes;
    int count = 0;
    for_each_triple_tree(n, [&](const TripleTree& tt) {
      ++count;
      const Triangulation3D T = triple_to_triangulation(tt);
      CHECK(triangulation_to_triple(T) == tt);
      codes.insert(T.canonical_code());
      const Triangulation3D R = relabel(T, rng);
      CHECK(R.canonical_code() == T.canonical_code());
      CHECK(triangulation_to_triple(R) == tt);
    });
    CHECK(static_cast<int>(codes.size()) == count);
  }
}

TEST_CASE("tampered edge trees are rejected") {
  int tested = 0;
  for_each_triple_tree(5, [&](const TripleTree& tt) {
    const Triangulation3D T = triple_to_triangulation(tt);
    auto e = T.edge_tree();
    // Adding any edge to a spanning tree closes a cycle.
    for (int c = 0; c < T.num_edges(); ++c) {
      if (std::find(e.begin(), e.end(), c) != e.end()) continue;
      Triangulation3D bad = T;
      auto more = e;
      more.push_back(c);
      bad.set_edge_tree(more);
      CHECK(verify_membership(bad).issue == MembershipIssue::ECycle);
      CHECK_THROWS_AS(triangulation_to_triple(bad), Error);
      ++tested;
      break;
    }
    Triangulation3D fewer = T;
    fewer.set_edge_tree(std::vector<int>(e.begin() + 1, e.end()));
    CHECK_FALSE(verify_membership(fewer).ok());
    try {
      (void)triangulation_to_triple(fewer);
      FAIL("tampered E accepted");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::MembershipFailed);
    }
  });
  CHECK(tested == 100);
}

TEST_CASE("a broken dual tree is rejected") {
  const auto trees = enumerate_triple_trees(6);
  const Triangulation3D T = triple_to_triangulation(trees.front());
  Triangulation3D bad = T;
  auto faces = T.tree_faces();
  faces.pop_back();
  bad.set_tree(faces);
  CHECK(verify_membership(bad).issue == MembershipIssue::T0NotSpanningTree);
}

TEST_CASE("small sizes have no tetrahedra") {
  for (const auto& tt : enumerate_triple_trees(2)) {
    CHECK_THROWS_AS(triple_to_triangulation(tt), Error);
  }
}
