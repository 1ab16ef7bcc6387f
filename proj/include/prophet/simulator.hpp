#pragma once

// Exact and Monte Carlo evaluation of the four online policies, and
// competitive-ratio reports against the prophet and the online optimum.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "prophet/contraction.hpp"
#include "prophet/disjoint.hpp"
#include "prophet/instance.hpp"
#include "prophet/oracle.hpp"
#include "prophet/path_cover.hpp"
#include "prophet/policies.hpp"

namespace prophet {

enum class PolicyKind { Width1, Width1Labeled, General, Disjoint };

std::optional<PolicyKind> parse_policy_kind(std::string_view name);
const char* policy_name(PolicyKind kind);

struct PolicyOptions {
  PolicyKind kind = PolicyKind::Width1;
  std::optional<PathCover> cover;           // defaults to min_path_cover(g, cover_seed)
  std::optional<std::uint64_t> cover_seed;
  std::optional<std::size_t> d;             // labeled policies: at least the instance's d
  FeasibilityMode feasibility;              // exact unless monte_carlo is set
  EnumerationOptions law;                   // how the tentative laws are computed
  std::uint64_t cap = kDefaultEnumerationCap;
};

/// A policy with every offline ingredient (laws, alpha, p(e), contractions,
/// plan) computed once; immutable afterwards and safe to share across threads.
class PreparedPolicy {
 public:
  static PreparedPolicy prepare(const Instance& g, const PolicyOptions& options);

  struct ExactValue {
    double value = 0.0;                // E(ALG) in g, connector values included
    double without_connectors = 0.0;   // E(ALG) counting only the width-1 layer's edges
    std::vector<double> per_part;      // general: per G_i (with connectors)
  };

  PolicyKind kind() const noexcept { return kind_; }
  const PathCover& cover() const noexcept { return cover_; }
  std::size_t k() const noexcept { return cover_.size(); }
  std::size_t d() const noexcept { return d_; }
  /// Guaranteed competitive constant for this policy on this instance.
  double guaranteed_ratio() const;
  std::string bound_label() const;
  const std::optional<DisjointPlan>& disjoint_plan() const noexcept { return plan_; }

  ExactValue exact_value() const;
  /// One run on a realization of g; internal coins come from `rng`.
  Trajectory run(const Realization& r, Rng& rng) const;

  struct Part {
    std::optional<ContractedInstance> contracted;
    FocalPath focal;
    SelectionProfile law;
    std::vector<double> acceptance;
    std::optional<AlphaSchedule> schedule;
    std::optional<FeasibilityProbs> probs;
  };
  const std::vector<Part>& parts() const noexcept { return parts_; }

 private:
  const Instance* g_ = nullptr;
  PolicyKind kind_ = PolicyKind::Width1;
  PathCover cover_;
  std::size_t d_ = 0;
  std::uint64_t cap_ = kDefaultEnumerationCap;
  std::optional<DisjointPlan> plan_;
  std::vector<Part> parts_;
};

double exact_policy_value(const Instance& g, const PreparedPolicy& policy);

struct PolicyRunReport {
  std::string policy;
  nlohmann::json parameters;
  bool exact = true;
  double alg = 0.0;
  double alg_std_error = 0.0;
  std::optional<double> alg_without_connectors;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double opt = 0.0;
  double opt_std_error = 0.0;
  std::optional<double> online_opt;
  double ratio = 0.0;
  double bound = 0.0;
  std::string bound_label;
  bool pass = false;
  double wall_seconds = 0.0;
};

/// Trial j draws its realization and coins from a generator seeded by
/// derive_seed(master_seed, j); results do not depend on `threads`.
PolicyRunReport monte_carlo_estimate(const Instance& g, const PreparedPolicy& policy, std::uint64_t trials,
                                     std::uint64_t master_seed, unsigned threads = 0);

struct ReportMode {
  bool monte_carlo = false;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool include_online_opt = true;
  std::uint64_t cap = kDefaultEnumerationCap;
};

PolicyRunReport competitive_report(const Instance& g, const PreparedPolicy& policy, const ReportMode& mode);

/// `include_timing` false drops wall-clock so identical runs serialize identically.
nlohmann::json report_to_json(const PolicyRunReport& report, bool include_timing = true);
std::string report_to_table(const PolicyRunReport& report);

}  // namespace prophet
