#pragma once

// Offline benchmarks: the prophet's optimal path per realization, its
// expectation, the selection probabilities x_e and the per-node conditional
// choice laws derived from it, plus the best online policy by backward
// induction.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prophet/instance.hpp"

namespace prophet {

/// Which offline strategy a quantity refers to. `restricted` is OPT when OPT
/// stays inside `allowed`, and the fixed `fallback` path otherwise.
struct OfflineSpec {
  enum class Kind { Opt, OptRestricted };
  Kind kind = Kind::Opt;
  std::vector<bool> allowed;  // indexed by edge id
  std::vector<EdgeId> fallback;

  static OfflineSpec opt() { return {}; }
  static OfflineSpec restricted(std::vector<bool> allowed, std::vector<EdgeId> fallback);
  std::string describe() const;
};

struct PathSelection {
  std::vector<EdgeId> edges;
  double value = 0.0;
  std::vector<int> label_usage;  // per label, for every label of the instance
};

/// Mixed-radix space of residual-capacity vectors. Labels whose capacity is
/// at least their number of edges can never bind and are not tracked.
class CapacitySpace {
 public:
  explicit CapacitySpace(const Instance& g, std::uint64_t state_cap = kDefaultEnumerationCap);

  std::size_t size() const noexcept { return size_; }
  /// Index of the state with every capacity available.
  std::size_t full() const noexcept { return full_; }
  bool feasible(std::size_t state, EdgeId e) const;
  /// State after taking `e`; caller checks feasibility first.
  std::size_t take(std::size_t state, EdgeId e) const { return state - delta_[e]; }
  const std::vector<LabelIndex>& tracked() const noexcept { return tracked_; }
  int residual(std::size_t state, std::size_t tracked_index) const;

 private:
  std::vector<LabelIndex> tracked_;
  std::vector<std::size_t> stride_;
  std::vector<std::size_t> radix_;
  std::vector<std::size_t> delta_;                   // per edge
  std::vector<std::vector<std::size_t>> edge_tracked_;  // per edge: tracked indices
  std::size_t size_ = 1;
  std::size_t full_ = 0;
};

/// Label-constrained longest path via DP over (node, residual capacities).
/// Ties between maximum-value paths go to the lexicographically smallest
/// edge-id sequence.
class OptSolver {
 public:
  explicit OptSolver(const Instance& g, std::uint64_t state_cap = kDefaultEnumerationCap);

  PathSelection solve(const Realization& r, const OfflineSpec& spec = OfflineSpec::opt()) const;
  const CapacitySpace& capacities() const noexcept { return caps_; }

 private:
  PathSelection solve_unrestricted(const Realization& r) const;
  PathSelection finish(const Realization& r, std::vector<EdgeId> edges) const;

  const Instance* g_;
  CapacitySpace caps_;
};

PathSelection opt_path(const Instance& g, const Realization& r,
                       const OfflineSpec& spec = OfflineSpec::opt());

/// Exact enumeration unless `monte_carlo` is set; MC always needs explicit trials and seed.
struct EnumerationOptions {
  std::uint64_t cap = kDefaultEnumerationCap;
  bool monte_carlo = false;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  bool exact = true;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Everything derived from one pass over the realization space for a spec.
struct SelectionProfile {
  OfflineSpec spec;
  Estimate value;
  std::vector<double> edge_prob;  // x_e
  // choice[u][o][j]: P(selection uses out_edges(u)[j] | u has outcome o);
  // the final entry j == deg(u) is the "no outgoing edge of u" mass.
  std::vector<std::vector<std::vector<double>>> choice;

  const std::vector<double>& law(NodeIndex u, std::size_t outcome) const {
    return choice[u][outcome];
  }
};

SelectionProfile selection_profile(const Instance& g, const OfflineSpec& spec,
                                   const EnumerationOptions& options = {});

/// Calls fn(realization, selection) for every realization.
template <class Fn>
void for_each_selection(const Instance& g, const OfflineSpec& spec, std::uint64_t cap, Fn&& fn) {
  const OptSolver solver(g, cap);
  for_each_realization(g, cap, [&](const Realization& r) { fn(r, solver.solve(r, spec)); });
}

Estimate expected_opt(const Instance& g, const OfflineSpec& spec = OfflineSpec::opt(),
                      const EnumerationOptions& options = {});

struct EdgeProbabilities {
  OfflineSpec spec;
  std::vector<double> x;  // indexed by edge id
};

EdgeProbabilities edge_probabilities(const Instance& g, const OfflineSpec& spec = OfflineSpec::opt(),
                                     const EnumerationOptions& options = {});

/// Law over out_edges(u) plus a trailing "none" entry, given u's outcome.
std::vector<double> conditional_choice_distribution(const Instance& g, const OfflineSpec& spec,
                                                    NodeIndex u, std::size_t outcome,
                                                    const EnumerationOptions& options = {});

/// Probability that the spec's selection is exactly `path`.
double selection_probability(const Instance& g, const OfflineSpec& spec,
                             const std::vector<EdgeId>& path, std::uint64_t cap = kDefaultEnumerationCap);

/// Value of the best online policy, by backward induction over
/// (node, residual capacities) with the node's outcome observed on arrival.
double optimal_online_value(const Instance& g, std::uint64_t state_cap = kDefaultEnumerationCap);

}  // namespace prophet
