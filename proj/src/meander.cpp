#include "ttlab/meander.hpp"

#include <sstream>

#include "ttlab/core.hpp"

namespace ttlab {

namespace {

void check_sizes(std::span<const int> p1, std::span<const int> p2) {
  if (p1.size() != p2.size()) throw Error(ErrorCode::SizeMismatch, "meander pairings differ in size");
  if (!is_involution(p1) || !is_involution(p2)) {
    throw Error(ErrorCode::InvalidArgument, "meander input is not a pairing");
  }
}

}  // namespace

int loop_count(std::span<const int> p1, std::span<const int> p2) {
  check_sizes(p1, p2);
  DisjointSets ds(p1.size());
  for (int i = 0; i < static_cast<int>(p1.size()); ++i) {
    ds.unite(i, p1[i]);
    ds.unite(i, p2[i]);
  }
  return static_cast<int>(ds.components());
}

MeanderSystem zones(std::span<const int> p1, std::span<const int> p2) {
  check_sizes(p1, p2);
  if (!is_non_crossing(p1) || !is_non_crossing(p2)) {
    throw Error(ErrorCode::InvalidArgument, "zones need non-crossing pairings");
  }
  const int m = static_cast<int>(p1.size());
  MeanderSystem ms;
  ms.n = m / 2;
  ms.pi1.assign(p1.begin(), p1.end());
  ms.pi2.assign(p2.begin(), p2.end());

  DisjointSets loops(m), white(m), black(m);
  for (int i = 0; i < m; ++i) {
    for (DisjointSets* ds : {&loops, &white, &black}) {
      ds->unite(i, p1[i]);
      ds->unite(i, p2[i]);
    }
    (i % 2 == 0 ? white : black).unite(i, (i + 1) % m);
  }
  ms.loop = loops.labels();
  ms.num_loops = static_cast<int>(loops.components());

  std::vector<int> wid(m, -1), bid(m, -1);
  ms.white_zone.resize(m);
  ms.black_zone.resize(m);
  for (int i = 0; i < m; ++i) {
    int w = white.find(i);
    if (wid[w] < 0) {
      wid[w] = ms.num_zones();
      ms.zone_color.push_back(ZoneColor::White);
    }
    ms.white_zone[i] = wid[w];
    int b = black.find(i);
    if (bid[b] < 0) {
      bid[b] = ms.num_zones();
      ms.zone_color.push_back(ZoneColor::Black);
    }
    ms.black_zone[i] = bid[b];
  }
  return ms;
}

bool ZoneTree::is_tree() const {
  if (static_cast<int>(edges.size()) != num_zones - 1) return false;
  DisjointSets ds(num_zones);
  for (auto [a, b] : edges) {
    if (!ds.unite(a, b)) return false;
  }
  return true;
}

bool ZoneTree::properly_colored() const {
  for (auto [a, b] : edges) {
    if (color[a] == color[b]) return false;
  }
  return true;
}

ZoneTree zone_adjacency_tree(const MeanderSystem& m) {
  ZoneTree t;
  t.num_zones = m.num_zones();
  t.color = m.zone_color;
  t.edges.assign(m.num_loops, {-1, -1});
  for (int i = 0; i < static_cast<int>(m.loop.size()); ++i) {
    t.edges[m.loop[i]] = {m.white_zone[i], m.black_zone[i]};
  }
  return t;
}

ZoneTree zone_adjacency_tree(std::span<const int> p1, std::span<const int> p2) {
  return zone_adjacency_tree(zones(p1, p2));
}

std::string meander_csv(const MeanderSystem& m) {
  std::ostringstream os;
  os << "# ttlab/1 meander\nposition,loop,zone,color\n";
  for (int i = 0; i < static_cast<int>(m.loop.size()); ++i) {
    os << i << ',' << m.loop[i] << ',' << m.white_zone[i] << ",white\n";
    os << i << ',' << m.loop[i] << ',' << m.black_zone[i] << ",black\n";
  }
  return os.str();
}

}  // namespace ttlab
