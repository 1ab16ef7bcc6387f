#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prophet/instance.hpp"

namespace prophet {

/// s,t-paths whose node sets jointly cover V.
struct PathCover {
  std::vector<std::vector<EdgeId>> paths;
  std::vector<std::vector<NodeIndex>> node_orders;

  std::size_t size() const noexcept { return paths.size(); }
};

/// Maximum bipartite matching by Hopcroft-Karp. Left and right vertices are
/// 0-based; adjacency lists give the right neighbours of each left vertex.
class HopcroftKarp {
 public:
  HopcroftKarp(std::size_t left, std::size_t right);
  void add_edge(std::size_t u, std::size_t v);
  std::size_t run();
  /// Right partner of left vertex u, if matched.
  std::optional<std::size_t> mate_of_left(std::size_t u) const;
  std::optional<std::size_t> mate_of_right(std::size_t v) const;

 private:
  bool bfs();
  bool dfs(std::size_t u);

  std::size_t left_;
  std::size_t right_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> pair_left_;
  std::vector<std::size_t> pair_right_;
  std::vector<std::size_t> dist_;
};

/// Minimum path cover: maximum matching on the split graph of the transitive
/// closure, chains expanded into real s,t-paths through fewest-edge unlabeled
/// connections. `cover_seed` permutes adjacency order, which selects among
/// same-size covers.
PathCover min_path_cover(const Instance& g, std::optional<std::uint64_t> cover_seed = std::nullopt);

/// Width of the DAG, i.e. the size of min_path_cover.
std::size_t graph_width(const Instance& g);

/// Largest set of pairwise incomparable nodes, by exhaustive search.
/// Throws InvalidArgument above `max_nodes` nodes.
std::vector<NodeIndex> max_antichain_bruteforce(const Instance& g, std::size_t max_nodes = 20);

/// Checks every path is an s,t-path and the union of their nodes is V.
bool is_valid_cover(const Instance& g, const PathCover& cover);

/// Builds a PathCover from explicit edge-id paths; throws on invalid input.
PathCover make_cover(const Instance& g, std::vector<std::vector<EdgeId>> paths);

}  // namespace prophet
