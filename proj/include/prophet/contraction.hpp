#pragma once

// Width-1 instance G_i around one cover path P_i. Edges leaving V(P_i) are
// redirected to the earliest P_i node reachable through unlabeled edges
// ("artificial" edges) and keep the original edge's value and labels.

#include <optional>
#include <vector>

#include "prophet/instance.hpp"
#include "prophet/path_cover.hpp"

namespace prophet {

struct ArtificialEdge {
  EdgeId contracted = 0;  // id in G_i
  EdgeId original = 0;    // id in g
  NodeIndex landing = 0;  // v, in g
  NodeIndex target = 0;   // v', in g
  std::vector<EdgeId> connector;  // fewest-edge unlabeled path v -> v' in g
};

struct ContractedInstance {
  Instance graph;
  std::size_t cover_index = 0;
  std::vector<NodeIndex> to_original_node;  // per G_i node
  std::vector<EdgeId> to_original_edge;     // per G_i edge
  std::vector<std::optional<std::size_t>> artificial_of;  // per G_i edge
  std::vector<ArtificialEdge> artificial;
  std::vector<EdgeId> focal;  // P_i in G_i edge ids

  /// Realization of G_i induced by a realization of g (same node outcomes).
  Realization restrict(const Realization& r) const;
  /// Replays a G_i edge sequence in g, expanding artificial edges.
  std::vector<EdgeId> expand(const std::vector<EdgeId>& contracted_path) const;
};

/// `index` is 0-based into cover.paths. Throws InvalidInstance when some
/// landing node has no unlabeled route back to P_i.
ContractedInstance build_contracted_instance(const Instance& g, const PathCover& cover, std::size_t index);

}  // namespace prophet
