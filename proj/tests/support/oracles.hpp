#pragma once

// Brute-force reference implementations used only by the tests. They share
// nothing with the library beyond the Instance accessors: paths are found by
// exhaustive search, realizations by plain recursion, and policy runs by
// walking the full execution tree.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "prophet/instance.hpp"

namespace oracle {

using prophet::EdgeId;
using prophet::Instance;
using prophet::NodeIndex;

struct World {
  std::vector<std::size_t> outcome;  // per node
  double mass = 1.0;
};

inline void for_each_world(const Instance& g, const std::function<void(const World&)>& fn) {
  World w;
  w.outcome.assign(g.node_count(), 0);
  std::function<void(NodeIndex, double)> rec = [&](NodeIndex u, double mass) {
    if (u == g.node_count()) {
      w.mass = mass;
      fn(w);
      return;
    }
    const auto& rows = g.outcomes(u);
    for (std::size_t o = 0; o < rows.size(); ++o) {
      w.outcome[u] = o;
      rec(u + 1, mass * rows[o].mass);
    }
  };
  rec(0, 1.0);
}

inline double edge_value(const Instance& g, const World& w, EdgeId e) {
  const NodeIndex u = g.edge(e).src;
  const auto& out = g.out_edges(u);
  const auto slot = static_cast<std::size_t>(std::find(out.begin(), out.end(), e) - out.begin());
  return g.outcomes(u)[w.outcome[u]].values[slot];
}

/// Every s,t-path as an edge sequence, in lexicographic order of edge ids.
inline std::vector<std::vector<EdgeId>> all_st_paths(const Instance& g) {
  std::vector<std::vector<EdgeId>> paths;
  std::vector<EdgeId> cur;
  std::function<void(NodeIndex)> dfs = [&](NodeIndex u) {
    if (u == g.node_count() - 1) {
      paths.push_back(cur);
      return;
    }
    std::vector<EdgeId> out = g.out_edges(u);
    std::sort(out.begin(), out.end());
    for (EdgeId e : out) {
      cur.push_back(e);
      dfs(g.edge(e).dst);
      cur.pop_back();
    }
  };
  dfs(0);
  return paths;
}

inline bool within_capacity(const Instance& g, const std::vector<EdgeId>& path) {
  std::map<std::size_t, int> used;
  for (EdgeId e : path)
    for (auto l : g.edge(e).labels)
      if (++used[l] > g.label(l).capacity) return false;
  return true;
}

inline double path_value(const Instance& g, const World& w, const std::vector<EdgeId>& path) {
  double v = 0.0;
  for (EdgeId e : path) v += edge_value(g, w, e);
  return v;
}

struct Best {
  std::vector<EdgeId> path;
  double value = 0.0;
};

/// Maximum-value feasible path; the first maximum in lexicographic order wins.
/// With `allowed`, returns the best path when it lies inside `allowed` and
/// `fallback` otherwise.
inline Best best_path(const Instance& g, const std::vector<std::vector<EdgeId>>& paths, const World& w,
                      const std::vector<bool>* allowed = nullptr, const std::vector<EdgeId>* fallback = nullptr) {
  Best best;
  bool found = false;
  for (const auto& p : paths) {
    if (!within_capacity(g, p)) continue;
    const double v = path_value(g, w, p);
    if (!found || v > best.value + 1e-9 * std::max(1.0, std::abs(best.value))) {
      best = {p, v};
      found = true;
    }
  }
  if (allowed != nullptr) {
    bool inside = true;
    for (EdgeId e : best.path) inside = inside && (*allowed)[e];
    if (!inside) best = {*fallback, path_value(g, w, *fallback)};
  }
  return best;
}

struct Profile {
  double expected = 0.0;
  std::vector<double> x;  // per edge
  // law[u][o][j], trailing "none" slot
  std::vector<std::vector<std::vector<double>>> law;
};

inline Profile profile(const Instance& g, const std::vector<bool>* allowed = nullptr,
                       const std::vector<EdgeId>* fallback = nullptr) {
  const auto paths = all_st_paths(g);
  Profile p;
  p.x.assign(g.edge_count(), 0.0);
  p.law.resize(g.node_count());
  std::vector<std::vector<double>> outcome_mass(g.node_count());
  for (NodeIndex u = 0; u < g.node_count(); ++u) {
    p.law[u].assign(g.outcomes(u).size(), std::vector<double>(g.out_edges(u).size() + 1, 0.0));
    outcome_mass[u].assign(g.outcomes(u).size(), 0.0);
  }
  for_each_world(g, [&](const World& w) {
    const Best b = best_path(g, paths, w, allowed, fallback);
    p.expected += w.mass * b.value;
    std::vector<bool> used_node(g.node_count(), false);
    for (EdgeId e : b.path) {
      p.x[e] += w.mass;
      const NodeIndex u = g.edge(e).src;
      const auto& out = g.out_edges(u);
      const auto slot = static_cast<std::size_t>(std::find(out.begin(), out.end(), e) - out.begin());
      p.law[u][w.outcome[u]][slot] += w.mass;
      used_node[u] = true;
    }
    for (NodeIndex u = 0; u < g.node_count(); ++u) {
      outcome_mass[u][w.outcome[u]] += w.mass;
      if (!used_node[u]) p.law[u][w.outcome[u]].back() += w.mass;
    }
  });
  for (NodeIndex u = 0; u < g.node_count(); ++u)
    for (std::size_t o = 0; o < p.law[u].size(); ++o)
      for (double& v : p.law[u][o]) v = outcome_mass[u][o] > 0 ? v / outcome_mass[u][o] : 0.0;
  return p;
}

/// Best online value by recursion over (node, labels used so far), with the
/// node's outcome observed on arrival.
inline double online_optimum(const Instance& g) {
  std::map<std::pair<NodeIndex, std::vector<int>>, double> memo;
  std::function<double(NodeIndex, std::vector<int>)> value = [&](NodeIndex u, std::vector<int> used) -> double {
    if (u == g.node_count() - 1) return 0.0;
    auto key = std::make_pair(u, used);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double total = 0.0;
    const auto& out = g.out_edges(u);
    for (const auto& row : g.outcomes(u)) {
      double best = -1.0;
      for (std::size_t j = 0; j < out.size(); ++j) {
        std::vector<int> next = used;
        bool ok = true;
        for (auto l : g.edge(out[j]).labels) ok = ok && ++next[l] <= g.label(l).capacity;
        if (!ok) continue;
        best = std::max(best, row.values[j] + value(g.edge(out[j]).dst, next));
      }
      total += row.mass * best;
    }
    memo[key] = total;
    return total;
  };
  return value(0, std::vector<int>(g.label_count(), 0));
}

/// Full execution tree of the width-1 rule along `focal`: draw a tentative
/// edge from `law`, take the focal edge on "none", on the focal edge itself,
/// or when the tentative edge has no capacity left; otherwise accept with
/// the edge's acceptance probability.
struct TreeResult {
  double value = 0.0;
  std::vector<double> take;            // P(e in ALG)
  std::vector<double> tentative_take;  // P(e tentative and accepted)
  std::vector<double> feasible;        // P(reach src(e) with capacity for e)
  std::vector<double> acceptance;
};

enum class AcceptanceKind { Fixed, Labeled };

inline TreeResult execution_tree(const Instance& g, const std::vector<EdgeId>& focal,
                                 const std::vector<std::vector<std::vector<double>>>& law, AcceptanceKind kind,
                                 std::vector<double> fixed_acceptance, std::size_t d) {
  const std::size_t m = g.edge_count();
  std::vector<NodeIndex> nodes{0};
  for (EdgeId e : focal) nodes.push_back(g.edge(e).dst);
  std::vector<std::optional<std::size_t>> pos(g.node_count());
  for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = i;

  std::vector<double> acceptance = kind == AcceptanceKind::Fixed ? fixed_acceptance : std::vector<double>(m, 1.0);
  TreeResult res;
  res.take.assign(m, 0.0);
  res.tentative_take.assign(m, 0.0);
  res.feasible.assign(m, 0.0);

  // Walks every branch; `stop_at` limits the walk to arrivals at that focal
  // position (used to measure p(e) before acceptances downstream are known).
  auto walk = [&](std::size_t stop_at, bool record) {
    std::vector<double> feasible(m, 0.0);
    for_each_world(g, [&](const World& w) {
      std::function<void(std::size_t, std::vector<int>, double, double)> go =
          [&](std::size_t i, std::vector<int> used, double prob, double acc) {
            if (prob == 0.0) return;
            const NodeIndex u = nodes[i];
            if (i == stop_at) {
              for (EdgeId e : g.out_edges(u)) {
                bool ok = true;
                for (auto l : g.edge(e).labels) ok = ok && used[l] + 1 <= g.label(l).capacity;
                if (ok) feasible[e] += w.mass * prob;
              }
              return;
            }
            if (i + 1 == nodes.size()) {
              if (record) res.value += w.mass * prob * acc;
              return;
            }
            const auto& out = g.out_edges(u);
            const auto& dist = law[u][w.outcome[u]];
            auto step = [&](EdgeId e, double p, bool tentative) {
              if (p == 0.0) return;
              std::vector<int> next = used;
              for (auto l : g.edge(e).labels) ++next[l];
              if (record) {
                res.take[e] += w.mass * prob * p;
                if (tentative) res.tentative_take[e] += w.mass * prob * p;
              }
              go(*pos[g.edge(e).dst], next, prob * p, acc + edge_value(g, w, e));
            };
            for (std::size_t j = 0; j <= out.size(); ++j) {
              const double pj = dist[j];
              if (pj == 0.0) continue;
              if (j == out.size() || out[j] == focal[i]) {
                step(focal[i], pj, false);
                continue;
              }
              const EdgeId e = out[j];
              bool ok = true;
              for (auto l : g.edge(e).labels) ok = ok && used[l] + 1 <= g.label(l).capacity;
              if (!ok) {
                step(focal[i], pj, false);
                continue;
              }
              step(e, pj * acceptance[e], true);
              step(focal[i], pj * (1.0 - acceptance[e]), false);
            }
          };
      go(0, std::vector<int>(g.label_count(), 0), 1.0, 0.0);
    });
    return feasible;
  };

  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const std::vector<double> f = walk(i, false);
    for (EdgeId e : g.out_edges(nodes[i])) {
      res.feasible[e] = f[e];
      if (kind == AcceptanceKind::Labeled && e != focal[i])
        acceptance[e] = f[e] > 0.0 ? std::min(1.0, 1.0 / ((static_cast<double>(d) + 2.0) * f[e])) : 0.0;
    }
  }
  walk(nodes.size(), true);
  res.acceptance = acceptance;
  return res;
}

/// alpha at each focal position: (1/(2-q)) / (1 - sum over edges jumping
/// over the position of x_e/(2-q)); returned per edge id (by source).
inline std::vector<double> alpha_acceptance(const Instance& g, const std::vector<EdgeId>& focal,
                                            const std::vector<double>& x, double q) {
  std::vector<NodeIndex> nodes{0};
  for (EdgeId e : focal) nodes.push_back(g.edge(e).dst);
  std::vector<std::optional<std::size_t>> pos(g.node_count());
  for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = i;
  std::vector<double> acceptance(g.edge_count(), 1.0);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double skip = 0.0;
    for (const auto& e : g.edges()) {
      if (!pos[e.src] || !pos[e.dst]) continue;
      if (*pos[e.src] < i && *pos[e.dst] > i) skip += x[e.id];
    }
    const double alpha = (1.0 / (2.0 - q)) / (1.0 - skip / (2.0 - q));
    for (EdgeId e : g.out_edges(nodes[i])) acceptance[e] = alpha;
  }
  return acceptance;
}

/// Size of a largest antichain of the reachability order, by exhaustive
/// branch and bound over incomparable sets.
inline std::size_t largest_antichain(const Instance& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t u = n; u-- > 0;) {
    reach[u][u] = true;
    for (EdgeId e : g.out_edges(u))
      for (std::size_t v = 0; v < n; ++v)
        if (reach[g.edge(e).dst][v]) reach[u][v] = true;
  }
  std::size_t best = 0;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t next) {
    best = std::max(best, chosen.size());
    if (chosen.size() + (n - next) <= best) return;
    for (std::size_t v = next; v < n; ++v) {
      bool ok = true;
      for (std::size_t c : chosen) ok = ok && !reach[c][v] && !reach[v][c];
      if (!ok) continue;
      chosen.push_back(v);
      rec(v + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return best;
}

/// Node sets S with s in S, t outside, and no edge entering S from outside.
inline std::vector<std::vector<bool>> closed_cuts(const Instance& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<bool>> cuts;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 2)); ++mask) {
    std::vector<bool> in(n, false);
    in[0] = true;
    for (std::size_t i = 1; i + 1 < n; ++i) in[i] = (mask >> (i - 1)) & 1U;
    bool closed = true;
    for (const auto& e : g.edges()) closed = closed && !(in[e.dst] && !in[e.src]);
    if (closed) cuts.push_back(in);
  }
  return cuts;
}

}  // namespace oracle
