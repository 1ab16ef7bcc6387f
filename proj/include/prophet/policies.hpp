#pragma once

// Width-1 online policies. At every node of the focal path the policy draws
// a tentative edge from the offline strategy's conditional law given the
// node's observed outcome, then accepts it with a calibrated probability or
// stays on the path.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "prophet/instance.hpp"
#include "prophet/oracle.hpp"

namespace prophet {

struct FocalPath {
  std::vector<EdgeId> edges;
  std::vector<NodeIndex> nodes;  // in path order, s first
  std::vector<std::optional<std::size_t>> position;  // per instance node

  bool contains(NodeIndex u) const { return position[u].has_value(); }
};

/// Throws InvalidArgument unless `edges` is an s,t-path; with
/// `require_full_cover` it must also visit every node.
FocalPath make_focal_path(const Instance& g, const std::vector<EdgeId>& edges,
                          bool require_full_cover = true);

struct Decision {
  NodeIndex node = 0;
  std::size_t outcome = 0;
  std::optional<EdgeId> tentative;
  bool feasible = true;
  std::optional<double> coin_probability;
  std::optional<bool> coin;
  EdgeId action = 0;
  double value = 0.0;
};

struct Trajectory {
  std::vector<EdgeId> edges;
  double value = 0.0;
  std::vector<Decision> decisions;
};

// ---------------------------------------------------------------------------
// Unlabeled focal path

struct AlphaSchedule {
  FocalPath focal;
  double q = 0.0;
  std::vector<double> x;                      // per edge id
  std::vector<double> alpha;                  // per focal position
  std::vector<std::vector<EdgeId>> skip_sets; // per focal position: edges (j,l) with j < i < l

  /// Acceptance probability per edge id: alpha at the edge's source.
  std::vector<double> acceptance(const Instance& g) const;
};

/// alpha(i) = (1/(2-q)) / (1 - sum_{e skips i} x_e/(2-q)).
/// Throws InternalError if some alpha leaves [0, 1 + 1e-9].
AlphaSchedule alpha_schedule(const Instance& g, const FocalPath& focal, const EdgeProbabilities& x,
                             double q = 0.0);

/// One execution on a fixed realization; `law` supplies the tentative laws.
Trajectory run_width1_unlabeled(const Instance& g, const AlphaSchedule& schedule,
                                const SelectionProfile& law, const Realization& r, Rng& rng);

/// Same rule with the tentative law of an arbitrary offline strategy and q > 0.
Trajectory run_modified_width1(const Instance& g, const AlphaSchedule& schedule,
                               const SelectionProfile& off_law, const Realization& r, Rng& rng);

// ---------------------------------------------------------------------------
// Labeled focal path

struct FeasibilityMode {
  bool monte_carlo = false;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t state_cap = kDefaultEnumerationCap;
};

/// p(e) = P(the policy visits src(e) with capacity left for every label of e),
/// and the acceptance probability 1/((d+2) p(e)) derived from it.
struct FeasibilityProbs {
  std::size_t d = 0;
  bool exact = true;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> p;           // per edge id
  std::vector<double> std_error;   // per edge id, zero in exact mode
  std::vector<double> acceptance;  // per edge id
};

FeasibilityProbs feasibility_probabilities(const Instance& g, const FocalPath& focal,
                                           const SelectionProfile& law, std::size_t d,
                                           const FeasibilityMode& mode = {});

Trajectory run_width1_labeled(const Instance& g, const FocalPath& focal, const SelectionProfile& law,
                              const FeasibilityProbs& probs, const Realization& r, Rng& rng);

// ---------------------------------------------------------------------------
// Shared engine

/// Exact law of a width-1 policy run, by forward state-distribution DP over
/// (focal position, residual capacities). Coins are folded in analytically.
struct Width1Evaluation {
  double value = 0.0;
  std::vector<double> take_prob;            // P(e in ALG)
  std::vector<double> tentative_take_prob;  // P(e tentative and taken)
  std::vector<double> visit_prob;           // per instance node
  std::vector<double> feasible_prob;        // p(e) as seen by the DP
  std::vector<double> acceptance;           // acceptance actually used, per edge
};

/// Called once per non-focal edge, in focal order, with the edge's feasible mass.
using AcceptanceRule = std::function<double(EdgeId, double feasible_mass)>;

Width1Evaluation evaluate_width1(const Instance& g, const FocalPath& focal, const SelectionProfile& law,
                                 const AcceptanceRule& acceptance,
                                 std::uint64_t state_cap = kDefaultEnumerationCap);

Width1Evaluation evaluate_width1_unlabeled(const Instance& g, const AlphaSchedule& schedule,
                                           const SelectionProfile& law);
Width1Evaluation evaluate_width1_labeled(const Instance& g, const FocalPath& focal,
                                         const SelectionProfile& law, const FeasibilityProbs& probs);

/// Single seeded run of the width-1 rule with fixed per-edge acceptance.
Trajectory run_width1(const Instance& g, const FocalPath& focal, const SelectionProfile& law,
                      std::span<const double> acceptance, const Realization& r, Rng& rng);

/// Clamps values in (1, 1 + 1e-9] to 1; throws InternalError beyond.
double checked_probability(double p, const char* what);

}  // namespace prophet
