#pragma once

// Generators for the standard constructions (classic and over-time prophet
// problems, multiple markets, multiple choice, vertex-arrival matching, and
// the hard examples) plus seeded random families for property tests.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "prophet/instance.hpp"

namespace prophet {

struct GeneratorParams {
  std::string family;
  std::size_t n = 0;      // candidates / horizon / bidders; 0 picks the family default
  std::size_t k = 3;      // strands or grid size
  double eps = 0.01;
  int m = 2;              // label capacity (mchoice), market count (markets), items (vertex-matching)
  std::vector<DiscreteLaw> laws;  // per step, cycled when shorter than the horizon
  std::vector<int> terms;         // allowed lease terms (overtime, markets)
  bool parallel_last = false;     // classic: last candidate on a bypass parallel to a zero backbone edge
};

struct GeneratedInstance {
  Instance instance;
  nlohmann::json metadata;
};

/// Families: classic, overtime, markets, upper49, grid, kplus1, mchoice,
/// vertex-matching. Throws InvalidArgument on unknown families or bad params.
GeneratedInstance generate_family_instance(const GeneratorParams& params);

const std::vector<std::string>& family_names();

/// Two-candidate classic instance: X1 = 1, X2 = 1/eps w.p. eps, X2 on a
/// bypass parallel to a zero backbone edge.
Instance classic_hard_pair(double eps);

/// Horizontal and vertical covers of the grid family (edge-id paths). Vertical
/// paths through the two valued columns finish along their extra edge to t.
std::vector<std::vector<EdgeId>> grid_cover(const Instance& grid, std::size_t k, bool horizontal);

struct RandomParams {
  std::string family = "layered";  // layered | width1 | disjoint
  std::size_t nodes = 6;           // layered, width1
  std::size_t strands = 2;         // disjoint
  std::size_t max_strand_length = 2;
  std::size_t max_outcomes = 3;
  double extra_edge_prob = 0.3;
  std::size_t labels = 0;          // number of distinct labels; 0 for unlabeled
  std::size_t max_labels_per_edge = 1;
  double labeled_prob = 0.5;       // chance a structural edge gets a labeled copy
  int max_capacity = 2;
  int max_value = 4;
};

/// Deterministic in `seed`. Every labeled edge gets a parallel unlabeled twin.
Instance generate_random_instance(const RandomParams& params, std::uint64_t seed);

}  // namespace prophet
