#pragma once

// Covers by node-disjoint strands (sharing only s and t). Edges are split
// into E(G_1..G_k); each OPT path lies entirely in one part.

#include <cstdint>
#include <vector>

#include "prophet/instance.hpp"
#include "prophet/oracle.hpp"
#include "prophet/path_cover.hpp"

namespace prophet {

struct DisjointPlan {
  PathCover cover;
  std::vector<std::size_t> owner;       // per edge id: index of its part
  std::vector<OfflineSpec> specs;       // OPT_i per part
  std::vector<double> f;                // P(OPT inside E(G_i))
  std::vector<double> q;                // P(OPT_i = P_i)
  std::vector<double> expected_opt_restricted;  // E(OPT_i)
  std::vector<double> certified;        // E(OPT_i) / (2 - q_i)
  std::size_t best = 0;                 // i*
};

/// Throws InvalidArgument if the instance is labeled, the paths are not
/// disjoint, or some strand has an edge leaving it.
DisjointPlan build_disjoint_plan(const Instance& g, const PathCover& cover,
                                 std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace prophet
