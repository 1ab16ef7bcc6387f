#include "prophet/path_cover.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <limits>
#include <numeric>

#include "prophet/errors.hpp"

namespace prophet {

namespace {
constexpr std::size_t kNil = std::numeric_limits<std::size_t>::max();
}

HopcroftKarp::HopcroftKarp(std::size_t left, std::size_t right)
    : left_(left), right_(right), adj_(left), pair_left_(left, kNil), pair_right_(right, kNil), dist_(left) {}

void HopcroftKarp::add_edge(std::size_t u, std::size_t v) {
  if (u >= left_ || v >= right_) throw InvalidArgument("matching edge out of range");
  adj_[u].push_back(v);
}

bool HopcroftKarp::bfs() {
  std::deque<std::size_t> queue;
  bool found_free = false;
  for (std::size_t u = 0; u < left_; ++u) {
    if (pair_left_[u] == kNil) {
      dist_[u] = 0;
      queue.push_back(u);
    } else {
      dist_[u] = kNil;
    }
  }
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : adj_[u]) {
      const std::size_t w = pair_right_[v];
      if (w == kNil) {
        found_free = true;
      } else if (dist_[w] == kNil) {
        dist_[w] = dist_[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return found_free;
}

bool HopcroftKarp::dfs(std::size_t u) {
  for (std::size_t v : adj_[u]) {
    const std::size_t w = pair_right_[v];
    if (w == kNil || (dist_[w] == dist_[u] + 1 && dfs(w))) {
      pair_left_[u] = v;
      pair_right_[v] = u;
      return true;
    }
  }
  dist_[u] = kNil;
  return false;
}

std::size_t HopcroftKarp::run() {
  std::fill(pair_left_.begin(), pair_left_.end(), kNil);
  std::fill(pair_right_.begin(), pair_right_.end(), kNil);
  std::size_t matched = 0;
  while (bfs()) {
    for (std::size_t u = 0; u < left_; ++u) {
      if (pair_left_[u] == kNil && dfs(u)) ++matched;
    }
  }
  return matched;
}

std::optional<std::size_t> HopcroftKarp::mate_of_left(std::size_t u) const {
  if (pair_left_[u] == kNil) return std::nullopt;
  return pair_left_[u];
}

std::optional<std::size_t> HopcroftKarp::mate_of_right(std::size_t v) const {
  if (pair_right_[v] == kNil) return std::nullopt;
  return pair_right_[v];
}

// ---------------------------------------------------------------------------

namespace {

std::vector<EdgeId> connect(const Instance& g, NodeIndex from, NodeIndex to) {
  if (from == to) return {};
  auto path = fewest_edge_path(g, from, to, /*unlabeled_only=*/true);
  if (!path) path = fewest_edge_path(g, from, to, /*unlabeled_only=*/false);
  if (!path) {
    throw InvalidInstance("no path from '" + g.node_name(from) + "' to '" + g.node_name(to) + "'");
  }
  return *path;
}

}  // namespace

PathCover min_path_cover(const Instance& g, std::optional<std::uint64_t> cover_seed) {
  const std::size_t n = g.node_count();
  const auto reach = transitive_closure(g);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(cover_seed.value_or(0));
  HopcroftKarp matching(n, n);
  std::vector<std::size_t> left_order = order;
  if (cover_seed) std::shuffle(left_order.begin(), left_order.end(), rng);
  for (std::size_t u : left_order) {
    std::vector<std::size_t> targets;
    for (NodeIndex v = 0; v < n; ++v) {
      if (v != u && reach[u][v]) targets.push_back(v);
    }
    if (cover_seed) std::shuffle(targets.begin(), targets.end(), rng);
    for (std::size_t v : targets) matching.add_edge(u, v);
  }
  matching.run();

  // chains start at nodes with no matched predecessor
  PathCover cover;
  for (NodeIndex head = 0; head < n; ++head) {
    if (matching.mate_of_right(head)) continue;
    std::vector<NodeIndex> chain{head};
    while (auto next = matching.mate_of_left(chain.back())) chain.push_back(*next);

    std::vector<EdgeId> path = connect(g, g.source(), chain.front());
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      auto leg = connect(g, chain[i], chain[i + 1]);
      path.insert(path.end(), leg.begin(), leg.end());
    }
    auto tail = connect(g, chain.back(), g.sink());
    path.insert(path.end(), tail.begin(), tail.end());
    cover.node_orders.push_back(path_nodes(g, path));
    cover.paths.push_back(std::move(path));
  }
  return cover;
}

std::size_t graph_width(const Instance& g) { return min_path_cover(g).size(); }

std::vector<NodeIndex> max_antichain_bruteforce(const Instance& g, std::size_t max_nodes) {
  const std::size_t n = g.node_count();
  if (n > max_nodes || n > 63) {
    throw InvalidArgument("antichain brute force limited to " + std::to_string(max_nodes) + " nodes");
  }
  const auto reach = transitive_closure(g);
  // compatible[u]: nodes incomparable with u
  std::vector<std::uint64_t> compatible(n, 0);
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeIndex v = 0; v < n; ++v) {
      if (u != v && !reach[u][v] && !reach[v][u]) compatible[u] |= std::uint64_t{1} << v;
    }
  }
  std::uint64_t best = 1;  // {s} is always an antichain
  auto search = [&](auto&& self, std::uint64_t chosen, std::uint64_t candidates) -> void {
    if (std::popcount(chosen) > std::popcount(best)) best = chosen;
    while (candidates != 0) {
      if (std::popcount(chosen) + std::popcount(candidates) <= std::popcount(best)) return;
      const int v = std::countr_zero(candidates);
      candidates &= candidates - 1;
      self(self, chosen | (std::uint64_t{1} << v), candidates & compatible[static_cast<std::size_t>(v)]);
    }
  };
  std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  search(search, 0, all);
  std::vector<NodeIndex> out;
  for (NodeIndex v = 0; v < n; ++v) {
    if (best >> v & 1) out.push_back(v);
  }
  return out;
}

bool is_valid_cover(const Instance& g, const PathCover& cover) {
  std::vector<bool> seen(g.node_count(), false);
  for (const auto& p : cover.paths) {
    if (!is_st_path(g, p)) return false;
    for (NodeIndex v : path_nodes(g, p)) seen[v] = true;
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

PathCover make_cover(const Instance& g, std::vector<std::vector<EdgeId>> paths) {
  PathCover cover;
  for (auto& p : paths) {
    if (!is_st_path(g, p)) throw InvalidArgument("cover entry is not an s,t-path");
    cover.node_orders.push_back(path_nodes(g, p));
    cover.paths.push_back(std::move(p));
  }
  if (!is_valid_cover(g, cover)) throw InvalidArgument("paths do not cover every node");
  return cover;
}

}  // namespace prophet
