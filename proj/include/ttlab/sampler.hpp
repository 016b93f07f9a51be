#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ttlab/planar_maps.hpp"

namespace ttlab {

// Move kinds come in reverse pairs (Grow/Shrink, Pachner23/Pachner32,
// PillowIn/PillowOut); the others are their own reverse. Each kind offers a
// number of choices that depends only on (n, N), so the proposal ratio of a
// transition is a ratio of choice counts.
enum class MoveKind {
  Grow,        // special subdivision at one of its 3n-3 sites
  Shrink,      // inverse subdivision at a boundary position
  RepairH,     // re-pair 2 or 3 arcs of pi_H
  RepairA,     // same on pi_A
  Reroot,      // move the root along the boundary of t
  TreeSwap,    // exchange a face of T0 for a face outside it
  EdgeSwap,    // exchange an edge of E for an edge outside it
  Pachner23,   // two tetrahedra become three around a new edge
  Pachner32,
  PillowIn,    // open a face into two tetrahedra around a new vertex
  PillowOut,
};
inline constexpr int kMoveKinds = 11;
const char* to_string(MoveKind k);
MoveKind reverse(MoveKind k);

std::int64_t choice_count(MoveKind k, int n, int loops);
// The candidate reached by one choice; nullopt when the result is not a
// triple tree (rejection before weighting).
std::optional<TripleTree> apply_move(MoveKind k, const TripleTree& tt, std::int64_t choice);

// Re-pairing behind RepairH/RepairA: choices below C(n,2) swap two arcs to the
// other non-crossing matching of their ends, the rest pick a triple of arcs and
// one of the four other non-crossing matchings of its six ends. The result may
// cross the remaining arcs.
std::vector<int> repaired_partner(std::span<const int> partner, std::int64_t choice);

class ChainState {
 public:
  explicit ChainState(TripleTree tt);
  const TripleTree& tree() const noexcept { return tree_; }
  int n() const noexcept { return tree_.n(); }
  int loops() const noexcept { return tree_.loops; }
  void replace(TripleTree tt);

 private:
  TripleTree tree_;
};

struct Proposal {
  MoveKind kind = MoveKind::Grow;
  std::int64_t choice = -1;
  std::optional<TripleTree> candidate;
  double log_ratio = 0;  // log q(b -> a) - log q(a -> b)
};
// Relative selection probability per kind. A kind and its reverse must carry
// the same weight, which keeps the proposal ratio a ratio of choice counts.
using KindWeights = std::array<double, kMoveKinds>;
inline constexpr KindWeights kEqualKinds{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
Proposal propose_move(const ChainState& s, std::mt19937_64& rng, const KindWeights& weights = kEqualKinds);

struct ChainConfig {
  double x = 1;
  std::optional<double> z;         // weight per unit size; else flat-histogram weights f(n)
  int n_min = 2, n_max = 7;
  std::vector<double> log_f;       // per size in the window; tuned when empty
  std::uint64_t seed = 1;
  std::int64_t steps = 1'000'000;  // production steps
  std::int64_t tuning_steps = 200'000;
  std::int64_t thinning = 0;       // 0: five times the measured autocorrelation time
  std::int64_t check_every = 1000; // validate_triple on the current state
  int blocks = 20;                 // jackknife blocks
  KindWeights kind_weights = kEqualKinds;
};

struct MoveStats {
  std::int64_t proposed = 0, valid = 0, accepted = 0;
};

// Jackknife over production blocks; the error is infinite when some block
// never visited a size the estimate uses.
struct Estimate {
  double value = 0, error = 0;
};

struct ChainResult {
  ChainConfig config;
  std::map<std::pair<int, int>, std::int64_t> visits;    // (n, N), every production step
  std::map<std::pair<int, int>, std::int64_t> thinned;   // (n, N), every `thinning` steps
  std::int64_t thinning = 1;
  double autocorrelation_time = 0;
  std::vector<double> log_f;                             // weights used in production
  std::map<int, double> log_m;                           // log M_n(x) up to a constant
  std::map<int, Estimate> ratio;                         // M_n / M_{previous visited size}
  std::optional<Estimate> z_star;
  std::pair<int, int> z_range{};  // sizes used by the fit
  std::array<MoveStats, kMoveKinds> moves{};
  std::map<int, std::int64_t> distinct;                  // distinct states seen per size
  double seconds = 0;
};

// Throws InvalidArgument on a bad window, weights or budget.
ChainResult run_chain(const ChainConfig& config);
// Independent chains with seeds derived from config.seed, merged. The weights
// are tuned once and shared.
ChainResult run_chains(const ChainConfig& config, int chains, int jobs);

struct ChiSquare {
  double statistic = 0;
  int dof = 0;
  double p_value = 0;
};
// Thinned histogram against f(n) x^N M_{n,N} from the exact table.
ChiSquare chi_square(const ChainResult& r, const std::map<std::pair<int, int>, double>& exact);

// M_{n,N} for n in [n_min, n_max] from exact enumeration (capped like it).
std::map<std::pair<int, int>, double> exact_table(int n_min, int n_max, int jobs = 1);
// M_n(x) / M_{n'}(x) for consecutive nonempty sizes n' < n of the table, the
// exact counterpart of ChainResult::ratio.
std::map<int, double> exact_ratios(const std::map<std::pair<int, int>, double>& table, double x);

}  // namespace ttlab
