#include <catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "ttlab/certificates.hpp"
#include "ttlab/enumeration.hpp"

using namespace ttlab;

namespace {

std::vector<int> e_edges(const TreeComplex& tc) {
  std::vector<int> out;
  for (int e = 0; e < tc.complex.num_edges(); ++e) {
    if (tc.boundary.distinguished(tc.complex.edge_slots(e).front())) out.push_back(e);
  }
  return out;
}

// Every closed gluing of the boundary of `tree` by orientation-reversing face
// identifications.
void for_each_closure(const TreeOfTetrahedra& tree, const std::function<void(Triangulation3D&)>& fn) {
  const int F = static_cast<int>(tree.boundary.size());
  std::vector<int> partner(F, -1), rot(F, 0);
  std::function<void()> rec = [&] {
    int a = 0;
    while (a < F && partner[a] >= 0) ++a;
    if (a == F) {
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
      for (int x = 0; x < F; ++x) {
        const int y = partner[x];
        if (y < x) continue;
        const auto& A = tree.boundary[x];
        const auto& B = tree.boundary[y];
        std::array<int, 4> perm{};
        perm[A.face] = B.face;
        for (int c = 0; c < 3; ++c) perm[A.local[c]] = B.local[((rot[x] - c) % 3 + 3) % 3];
        T.glue(A.tet, A.face, B.tet, B.face, perm);
      }
      T.set_tree(t0);
      fn(T);
      return;
    }
    for (int b = a + 1; b < F; ++b) {
      if (partner[b] >= 0) continue;
      partner[a] = b;
      partner[b] = a;
      for (int r = 0; r < 3; ++r) {
        rot[a] = r;
        rec();
      }
      partner[a] = partner[b] = -1;
    }
  };
  rec();
}

// Every spanning tree of the 1-skeleton, with the root on the first E edge of
// a face outside T0.
void for_each_decoration(Triangulation3D T, const std::function<void(const Triangulation3D&)>& fn) {
  const int V = T.num_vertices(), E = T.num_edges();
  std::vector<std::pair<int, int>> ends(E);
  for (int k = 0; k < T.num_tetrahedra(); ++k) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) ends[T.edge_class(k, a, b)] = {T.vertex_class(k, a), T.vertex_class(k, b)};
    }
  }
  std::vector<int> pick;
  std::function<void(int)> choose = [&](int from) {
    if (static_cast<int>(pick.size()) == V - 1) {
      std::vector<std::pair<int, int>> g;
      for (int e : pick) g.push_back(ends[e]);
      if (!is_spanning_tree(V, g)) return;
      T.set_edge_tree(pick);
      for (int k = 0; k < T.num_tetrahedra(); ++k) {
        for (int f = 0; f < 4; ++f) {
          if (T.in_tree(k, f)) continue;
          for (int u = 0; u < 4; ++u) {
            for (int v = 0; v < 4; ++v) {
              if (u == v || u == f || v == f || !T.in_edge_tree(T.edge_class(k, u, v))) continue;
              T.set_root({k, f, u, v});
              fn(T);
              return;
            }
          }
        }
      }
      return;
    }
    for (int e = from; e < E; ++e) {
      pick.push_back(e);
      choose(e + 1);
      pick.pop_back();
    }
  };
  choose(0);
}

// Starting from a middle-layer pair (e1, S1), finds a closed path
// e1 S1 e2 S2 ... ek Sk with e(i+1) in Si and e1 in Sk, then pairs each ei
// with Si, dropping the pairs these cells had. Plain edges and triangles form
// a tree, so the path must use edges of E.
std::optional<DiscreteVectorField> repair_along_cycle(const SimplexIndex& ix,
                                                      const DiscreteVectorField& f) {
  const auto mid = f.layer(1);
  if (mid.empty()) return std::nullopt;
  std::vector<std::vector<int>> tris_of(ix.count[1]);
  for (const auto& p : mid) {
    for (int e : ix.facets(2, p.cofacet)) tris_of[e].push_back(p.cofacet);
  }
  for (const auto& start : mid) {
    const int e1 = start.cell, s1 = start.cofacet;
    for (int e2 : ix.facets(2, s1)) {
      if (e2 == e1) continue;
      // Breadth-first search from e2 back to e1 avoiding s1.
      std::map<int, std::pair<int, int>> from;  // edge -> (previous edge, triangle)
      std::vector<int> queue{e2};
      from[e2] = {-1, -1};
      for (std::size_t i = 0; i < queue.size() && !from.count(e1); ++i) {
        const int x = queue[i];
        for (int y : tris_of[x]) {
          if (y == s1) continue;
          for (int z : ix.facets(2, y)) {
            if (z == x || from.count(z)) continue;
            from[z] = {x, y};
            queue.push_back(z);
          }
        }
      }
      if (!from.count(e1)) continue;
      std::vector<DiscreteVectorField::Pair> cycle{{1, e1, s1}};
      for (int z = e1; from[z].first >= 0; z = from[z].first) cycle.push_back({1, from[z].first, from[z].second});
      std::set<int> edges, tris;
      for (const auto& p : cycle) {
        edges.insert(p.cell);
        tris.insert(p.cofacet);
      }
      if (edges.size() != cycle.size() || tris.size() != cycle.size()) continue;
      DiscreteVectorField g;
      for (const auto& p : f.pairs) {
        if (p.dim == 1 && (edges.count(p.cell) || tris.count(p.cofacet))) continue;
        if (p.dim == 0 && edges.count(p.cofacet)) continue;
        g.pairs.push_back(p);
      }
      g.pairs.insert(g.pairs.end(), cycle.begin(), cycle.end());
      std::sort(g.pairs.begin(), g.pairs.end());
      return g;
    }
  }
  return std::nullopt;
}

std::optional<TreeOfTetrahedra> one_tetrahedron() {
  for (const auto& t : enumerate_outerplanar(3)) {
    for (const auto& p : enumerate_pairings(3)) {
      if (is_in_A(t, p.partner())) return tetra_tree_from_apollonian(glue(t, p.partner()));
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("two triangles sharing every edge") {
  const Triangulation2D sphere({5, 4, 3, 2, 1, 0});
  BoundarySurface tree(sphere, std::vector<int>{1, 2});
  const PairClass c = tree.classify(0, 1);
  REQUIRE(c.tag);
  CHECK(*c.tag == PairCase::F);
  CHECK(c.sigma == 0);
  CHECK(admissible_pairs(tree).size() == 1);

  // Two plain shared edges: obeys the rule but is one of the excluded shapes.
  BoundarySurface one(sphere, std::vector<int>{1});
  CHECK(one.classify(0, 1).tag == PairCase::Forbidden);
  CHECK(admissible_pairs(one).empty());
}

TEST_CASE("a plain two-step construction closes one tetrahedron") {
  const auto base = one_tetrahedron();
  REQUIRE(base);
  REQUIRE(base->num_tetrahedra() == 1);
  const Triangulation2D s = tree_boundary(*base);
  LocalConstruction lc{*base, {}, {}, {}};
  BoundarySurface surface(s);
  for (int a = 0; a < 4; ++a) {
    if (!surface.alive(a)) continue;
    for (int b = a + 1; b < 4; ++b) {
      const PairClass c = surface.classify(a, b);
      if (!c.adjacent) continue;
      lc.steps.push_back({a, b, c.sigma % 3});
      surface.glue(a, b, c.sigma);
      break;
    }
  }
  REQUIRE(lc.steps.size() == 2);
  lc.root = {base->boundary[0].tet, base->boundary[0].face, base->boundary[0].local[1], base->boundary[0].local[2]};
  const LcReplay r = run_local_construction(lc, false);
  REQUIRE(r);
  CHECK(r.T->is_closed());
  CHECK(r.T->euler_characteristic() == 0);
  CHECK(r.sigma_edges.size() == 2);

  const LcCollapse col = lc_to_collapse(lc);
  CHECK(col.complex.num_triangles() == 2);
  REQUIRE(col.sequence.steps.size() == 2);
  CHECK(col.sequence.steps[0].triangle != col.sequence.steps[1].triangle);
  CHECK_FALSE(check_collapse(col.complex, col.sequence));
  const auto back = collapse_to_lc(lc.base, col.complex, col.sequence, {}, lc.root);
  CHECK(back.steps == lc.steps);

  // One tetrahedron supports no triple tree, so no tree-avoiding gluing either.
  for_each_closure(*base, [&](Triangulation3D& T) {
    for_each_decoration(T, [&](const Triangulation3D& D) {
      CHECK_FALSE(verify_membership(D).ok());
      CHECK_FALSE(search_tree_avoiding_lc(D));
    });
  });
}

TEST_CASE("a boundary of two tetrahedra with a valid E0 has admissible pairs") {
  const auto trees = enumerate_triple_trees(4);
  REQUIRE_FALSE(trees.empty());
  for (const auto& tt : trees) {
    const TreeComplex tc = tree_complex(triple_to_triangulation(tt));
    CHECK_FALSE(admissible_pairs(tc.boundary).empty());
  }
}

TEST_CASE("certificates for every triple tree up to size 6") {
  std::map<char, long> tags;
  for (int n = 4; n <= 6; ++n) {
    for_each_triple_tree(n, [&](const TripleTree& tt) {
      const Triangulation3D T = triple_to_triangulation(tt);
      const auto lc = find_tree_avoiding_lc(T);
      REQUIRE(lc);
      CHECK(lc->steps.size() == static_cast<std::size_t>(n - 1));

      const LcReplay r = run_local_construction(*lc, true);
      REQUIRE(r);
      CHECK(r.T->canonical_code() == T.canonical_code());
      CHECK(r.T->is_closed());
      CHECK(r.T->euler_characteristic() == 0);
      CHECK(r.forbidden == 0);
      for (PairCase c : r.tags) {
        CHECK(c != PairCase::Forbidden);
        ++tags[to_char(c)];
      }
      // The same steps without avoidance give the same triangulation.
      const LcReplay plain = run_local_construction(*lc, false);
      REQUIRE(plain);
      CHECK(plain.T->canonical_code() == T.canonical_code());

      // The avoided set is the preimage of E and a spanning tree of the base boundary.
      const TreeComplex tc = tree_complex(T);
      const Triangulation2D surface = tree_boundary(lc->base);
      CHECK(std::ranges::equal(surface.twins(), tc.boundary.twins()));
      CHECK(lc->avoided == tc.boundary.distinguished_darts());
      CHECK(is_spanning_tree_of(surface, lc->avoided));

      // Collapse form: the complex is T^{T0}, collapsing onto E, and back.
      const LcCollapse col = lc_to_collapse(*lc);
      CHECK(col.complex == tc.complex);
      CHECK_FALSE(check_collapse(col.complex, col.sequence));
      const auto back = collapse_to_lc(lc->base, col.complex, col.sequence, lc->avoided, lc->root);
      CHECK(back.steps == lc->steps);

      // Reduction sequence on t0 and the recovered hierarchical pairing.
      const InducedReduction ir = reduction_from_lc(*lc);
      CHECK(ir.cut.t == tt.t);
      CHECK(reduction_sequence_check(ir.sequence));
      const auto pi = pi_h_from_reduction(ir.sequence);
      REQUIRE(pi);
      CHECK(*pi == tt.pi_h);
      CHECK(is_in_H(tt.t, pi->partner()));

      // Admissibility agrees on the boundary of T_s and on t_s at every step.
      BoundarySurface s(surface, lc->avoided);
      ReductionState red(ir.cut.t);
      const auto& tri = ir.cut.face_to_triangle;
      for (const LcStep& st : lc->steps) {
        for (int a = 0; a < s.num_faces(); ++a) {
          for (int b = a + 1; b < s.num_faces(); ++b) {
            if (!s.alive(a) || !s.alive(b)) continue;
            const auto c = s.classify(a, b);
            const bool on_surface = c.tag && *c.tag != PairCase::Forbidden;
            CHECK(on_surface == red.admissible(tri[a], tri[b]).has_value());
          }
        }
        const int slot = *red.admissible(tri[st.a], tri[st.b]);
        red.apply(tri[st.a], tri[st.b], slot);
        s.glue(st.a, st.b, 3 * st.a + st.sigma);
      }
    });
  }
  // Shapes seen along the greedy certificates.
  for (char c : {'a', 'b', 'c', 'd', 'e', 'f'}) CHECK(tags[c] > 0);
}

TEST_CASE("gradients of certificates") {
  long swaps = 0;  // perturbed fields
  for (int n = 4; n <= 5; ++n) {
    for_each_triple_tree(n, [&](const TripleTree& tt) {
      const Triangulation3D T = triple_to_triangulation(tt);
      const auto lc = find_tree_avoiding_lc(T);
      REQUIRE(lc);
      const DiscreteVectorField f = morse_from_lc(*lc);
      const LcReplay replay = run_local_construction(*lc);
      REQUIRE(replay);
      const Triangulation3D& R = *replay.T;
      CHECK(is_valid_field(R, f));
      CHECK(is_acyclic(R, f));
      CHECK(f.critical[0].size() == 1);
      CHECK(f.critical[1].empty());
      CHECK(f.critical[2].empty());
      CHECK(f.critical[3].size() == 1);
      const long chi = static_cast<long>(f.critical[0].size()) - static_cast<long>(f.critical[1].size()) +
                       static_cast<long>(f.critical[2].size()) - static_cast<long>(f.critical[3].size());
      CHECK(chi == R.euler_characteristic());

      // Bottom layer uses exactly E; top layer is a spanning tree of the dual graph.
      const SimplexIndex ix(R);
      std::vector<std::pair<int, int>> bottom, top;
      for (const auto& p : f.layer(0)) bottom.push_back({ix.edge_ends[p.cofacet][0], ix.edge_ends[p.cofacet][1]});
      CHECK(is_spanning_tree(ix.count[0], bottom));
      for (const auto& p : f.layer(2)) {
        const auto [k, q] = ix.triangle_rep[p.cell];
        top.push_back({k, R.gluing(k, q).tet});
      }
      CHECK(is_spanning_tree(ix.count[3], top));

      // Another peeling order gives another certificate with the same middle layer.
      for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        const auto other = find_tree_avoiding_lc(T, PeelOrder::Random, seed);
        REQUIRE(other);
        CHECK(morse_from_lc(*other).layer(1) == f.layer(1));
      }
      const auto high = find_tree_avoiding_lc(T, PeelOrder::Highest);
      REQUIRE(high);
      CHECK(morse_from_lc(*high).layer(1) == f.layer(1));

      // The peeled gradient of T^{T0} is the middle layer.
      const TreeComplex tc = tree_complex(R);
      const auto mu = morse_uniqueness(tc.complex, e_edges(tc));
      REQUIRE(mu);
      const TreeComplexIds ids = tree_complex_ids(R, tc, ix);
      std::vector<DiscreteVectorField::Pair> mapped;
      for (const auto& p : mu->pairs) mapped.push_back({1, ids.edge[p.cell], ids.triangle[p.cofacet]});
      std::sort(mapped.begin(), mapped.end());
      CHECK(mapped == f.layer(1));

      // Re-pairing the cells of a closed edge/triangle path through one pair
      // makes that path a cycle of the walk.
      if (auto g = repair_along_cycle(ix, f)) {
        CHECK(is_valid_field(R, *g));
        CHECK_FALSE(is_acyclic(R, *g));
        ++swaps;
      }
    });
  }
  CHECK(swaps > 0);
}

TEST_CASE("single tetrahedron layer fields") {
  const auto base = one_tetrahedron();
  REQUIRE(base);
  int closures = 0;
  for_each_closure(*base, [&](Triangulation3D& T) {
    const SimplexIndex ix(T);
    CHECK(is_acyclic(T, DiscreteVectorField{}));
    CHECK(ix.count[2] == 2);
    // Each triangle is a face of the tetrahedron twice, so pairing them walks
    // back through the second copy.
    DiscreteVectorField top;
    top.pairs.push_back({2, ix.triangle(0, 0), 0});
    CHECK(is_valid_field(T, top));
    CHECK_FALSE(is_acyclic(T, top));
    // Vertex to edge pairs along a path of distinct vertices are acyclic.
    DiscreteVectorField bottom;
    for (int e = 0; e < ix.count[1]; ++e) {
      const auto [u, v] = ix.edge_ends[e];
      if (u != v && bottom.pairs.empty()) bottom.pairs.push_back({0, v, e});
    }
    CHECK(is_valid_field(T, bottom));
    CHECK(is_acyclic(T, bottom));
    ++closures;
  });
  CHECK(closures == 27);  // three matchings of four faces, three twists per pair
}

TEST_CASE("tampered certificates fail") {
  int inadmissible = 0, scrambled = 0, scrambled_valid = 0;
  for_each_triple_tree(5, [&](const TripleTree& tt) {
    const Triangulation3D T = triple_to_triangulation(tt);
    const auto lc = find_tree_avoiding_lc(T);
    REQUIRE(lc);
    // Replace the first step by an adjacent but inadmissible pair.
    const BoundarySurface s(tree_boundary(lc->base), lc->avoided);
    bool found = false;
    for (int a = 0; a < s.num_faces() && !found; ++a) {
      for (int b = a + 1; b < s.num_faces() && !found; ++b) {
        const PairClass c = s.classify(a, b);
        if (!c.adjacent || (c.tag && *c.tag != PairCase::Forbidden)) continue;
        LocalConstruction bad = *lc;
        bad.steps.front() = {a, b, c.sigma >= 0 ? c.sigma % 3 : 0};
        for (int d = 0; d < 3; ++d) {
          if (s.twin(3 * a + d) / 3 == b) bad.steps.front().sigma = d;
        }
        const LcReplay r = run_local_construction(bad, true);
        CHECK(r.error == LcError::InadmissibleStep);
        CHECK(r.step == 0);
        found = true;
      }
    }
    if (found) ++inadmissible;

    // A gluing along a face that is already gone.
    LocalConstruction twice = *lc;
    twice.steps[1] = twice.steps[0];
    CHECK(run_local_construction(twice).error == LcError::DeadTriangle);
    LocalConstruction shorter = *lc;
    shorter.steps.pop_back();
    CHECK(run_local_construction(shorter).error == LcError::NonEmptyBoundary);

    InducedReduction ir = reduction_from_lc(*lc);
    std::reverse(ir.sequence.order.begin(), ir.sequence.order.end());
    if (reduction_sequence_check(ir.sequence)) {
      ++scrambled_valid;
      const auto pi = pi_h_from_reduction(ir.sequence);
      REQUIRE(pi);
      CHECK(is_in_H(tt.t, pi->partner()));
    } else {
      ++scrambled;
    }
  });
  CHECK(inadmissible > 0);
  CHECK(scrambled > 0);
  INFO("reversed reduction orders still valid: " << scrambled_valid);
  CHECK(scrambled + scrambled_valid == 100);

  // Membership failures have no certificate.
  const Triangulation3D T = triple_to_triangulation(enumerate_triple_trees(5).front());
  Triangulation3D bad = T;
  auto e = T.edge_tree();
  e.pop_back();
  bad.set_edge_tree(e);
  CHECK_FALSE(find_tree_avoiding_lc(bad));
  CHECK_FALSE(search_tree_avoiding_lc(bad));
}

TEST_CASE("two-triangle reduction") {
  const auto t = enumerate_outerplanar(2).front();
  const ReductionSequence rs{t, {1, 0}, {{0, 1}}};
  CHECK(reduction_sequence_check(rs));
  const auto pi = pi_h_from_reduction(rs);
  REQUIRE(pi);
  int members = 0;
  for (const auto& p : enumerate_pairings(2)) members += is_in_H(t, p.partner());
  CHECK(members == 1);
  CHECK(is_in_H(t, pi->partner()));
  CHECK_FALSE(reduction_sequence_check({t, {1, 0}, {}}));
  CHECK_FALSE(reduction_sequence_check({t, {0, 1}, {{0, 1}}}));
}

TEST_CASE("collapses of trees of triangles") {
  // One triangle keeps two edges.
  const EmbeddedComplex2 one({3, 5, 4, 0, 2, 1}, {3, 5, 4, 0, 2, 1});
  const std::vector<int> two{one.edge(0), one.edge(1)};
  const auto cs = collapse_tree_of_triangles(one, two);
  CHECK(cs.steps.size() == 1);
  CHECK(cs.steps[0].edge == one.edge(2));
  CHECK_FALSE(check_collapse(one, cs));
  CHECK_THROWS_AS(collapse_tree_of_triangles(one, std::vector<int>{one.edge(0)}), Error);
  const auto unique = morse_uniqueness(one, two);
  REQUIRE(unique);
  CHECK(unique->pairs.size() == 1);

  // Id[h] with its cut tree for every h in H_5; steps = triangles.
  int checked = 0;
  for (int n = 2; n <= 5; ++n) {
    const auto pairings = enumerate_pairings(n);
    for_each_outerplanar(n, [&](const OuterplanarTriangulation& t) {
      for (const auto& ph : pairings) {
        if (!is_in_H(t, ph.partner())) continue;
        const DecoratedComplex d = id_hierarchical(glue(t, ph.partner()));
        const auto seq = collapse_tree_of_triangles(d.complex, d.tree_edges);
        CHECK(static_cast<int>(seq.steps.size()) == d.complex.num_triangles());
        CHECK_FALSE(check_collapse(d.complex, seq));
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
          const auto other = collapse_tree_of_triangles(d.complex, d.tree_edges, PeelOrder::Random, seed);
          CHECK_FALSE(check_collapse(d.complex, other));
        }
        if (d.complex.num_triangles() == 4) ++checked;
      }
    });
  }
  CHECK(checked > 0);
}

TEST_CASE("a collapse ending on a cycle is rejected") {
  const EmbeddedComplex2 annulus({3, 5, 4, 0, 2, 1, 9, 11, 10, 6, 8, 7}, {7, 8, 4, 11, 2, 10, 9, 0, 1, 6, 5, 3});
  REQUIRE(annulus.num_triangles() == 2);
  const CollapsingSequence cs{{{annulus.edge(2), annulus.triangle(0)}, {annulus.edge(6), annulus.triangle(2)}}};
  const auto why = check_collapse(annulus, cs);
  REQUIRE(why);
  CHECK(why->find("spanning tree") != std::string::npos);
  // The remaining graph is not a tree, so no gradient with only it critical.
  std::vector<int> rest;
  for (int e = 0; e < annulus.num_edges(); ++e) {
    if (e != annulus.edge(2) && e != annulus.edge(6)) rest.push_back(e);
  }
  CHECK_THROWS_AS(morse_uniqueness(annulus, rest), Error);
  // Either of its spanning trees admits no gradient: the annulus does not collapse onto it.
  for (int e : rest) CHECK_FALSE(morse_uniqueness(annulus, std::vector<int>{e}));
}

TEST_CASE("tree-avoiding constructions exist exactly for members on small gluings") {
  std::map<int, std::array<long, 3>> seen;  // tetrahedra -> (decorations, members, constructions)
  for (int n = 3; n <= 5; ++n) {
    int bases = 0;
    for_each_outerplanar(n, [&](const OuterplanarTriangulation& t) {
      for (const auto& pa : enumerate_pairings(n)) {
        if (bases >= 2 || !is_in_A(t, pa.partner())) continue;
        ++bases;
        for_each_closure(tetra_tree_from_apollonian(glue(t, pa.partner())), [&](Triangulation3D& T) {
          for_each_decoration(T, [&](const Triangulation3D& D) {
            const bool member = verify_membership(D).ok();
            const auto lc = search_tree_avoiding_lc(D);
            CHECK(member == lc.has_value());
            auto& s = seen[D.num_tetrahedra()];
            ++s[0];
            s[1] += member;
            s[2] += lc.has_value();
            if (lc) {
              const LcReplay r = run_local_construction(*lc, true);
              REQUIRE(r);
              CHECK(r.T->canonical_code() == D.canonical_code());
            }
          });
        });
      }
    });
  }
  CHECK(seen[1][1] == 0);
  CHECK(seen[2][1] > 0);
  CHECK(seen[3][1] > 0);
}

TEST_CASE("every reduction sequence comes from a tree-avoiding construction (n <= 5)") {
  for (int n = 3; n <= 5; ++n) {
    const ConverseReport r = reduction_converse_report(n);
    INFO("n=" << n << " bases=" << r.bases << " sequences=" << r.sequences << " talc=" << r.talc
              << " members=" << r.members);
    CHECK(r.hierarchical == r.sequences);
    // Reported, not required: the converse is only observed here.
    if (r.talc != r.sequences) WARN("reduction sequences without a construction at n=" << n);
  }
}
