#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ttlab {

// Number of orbits of <p1, p2> on the positions.
int loop_count(std::span<const int> p1, std::span<const int> p2);

enum class ZoneColor { White = 0, Black = 1 };

// Every position lies on one loop and borders one white and one black zone.
// Ids are dense, in first-appearance order scanning positions upward (white
// zone before black zone at each position).
struct MeanderSystem {
  int n = 0;
  std::vector<int> pi1, pi2;
  std::vector<int> loop;
  std::vector<int> white_zone;
  std::vector<int> black_zone;
  std::vector<ZoneColor> zone_color;
  int num_loops = 0;
  int num_zones() const { return static_cast<int>(zone_color.size()); }
};

// Positions i, i+1 share a white vertex for even i and a black one for odd i.
MeanderSystem zones(std::span<const int> p1, std::span<const int> p2);

// One edge per loop (indexed by loop id) joining the two zones it separates.
struct ZoneTree {
  int num_zones = 0;
  std::vector<ZoneColor> color;
  std::vector<std::pair<int, int>> edges;  // (white zone, black zone)
  bool is_tree() const;
  bool properly_colored() const;
};

ZoneTree zone_adjacency_tree(std::span<const int> p1, std::span<const int> p2);
ZoneTree zone_adjacency_tree(const MeanderSystem& m);

// Rows "position,loop,zone,color", two per position.
std::string meander_csv(const MeanderSystem& m);

}  // namespace ttlab
