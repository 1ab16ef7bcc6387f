#include "prophet/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <set>

#include "prophet/errors.hpp"

namespace prophet {

DiscreteLaw bernoulli_law(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("B_eps requires eps in (0,1]");
  if (eps == 1.0) return {{1.0, 1.0}};
  return {{eps, 1.0 / eps}, {1.0 - eps, 0.0}};
}

DiscreteLaw constant_law(double value) { return {{1.0, value}}; }

Instance::Instance(std::vector<std::string> node_names, std::vector<Label> labels,
                   std::vector<EdgeDef> edges, std::vector<std::vector<Outcome>> outcomes)
    : node_names_(std::move(node_names)),
      labels_(std::move(labels)),
      edges_(std::move(edges)),
      outcomes_(std::move(outcomes)) {
  const std::size_t n = node_names_.size();
  if (n < 2) throw InvalidInstance("an instance needs at least the nodes s and t");
  {
    std::set<std::string> seen(node_names_.begin(), node_names_.end());
    if (seen.size() != n) throw InvalidInstance("duplicate node names");
  }
  outcomes_.resize(n);
  out_.assign(n, {});
  in_.assign(n, {});
  slot_.assign(edges_.size(), 0);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    auto& e = edges_[i];
    if (e.id != i) throw InvalidInstance("edge ids must be dense 0..|E|-1 in input order");
    if (e.src >= n || e.dst >= n) {
      throw InvalidInstance("edge " + std::to_string(e.id) + " references an unknown node");
    }
    std::sort(e.labels.begin(), e.labels.end());
    if (std::adjacent_find(e.labels.begin(), e.labels.end()) != e.labels.end()) {
      throw InvalidInstance("edge " + std::to_string(e.id) + " repeats a label");
    }
    for (LabelIndex l : e.labels) {
      if (l >= labels_.size()) {
        throw InvalidInstance("edge " + std::to_string(e.id) + " references an unknown label");
      }
    }
    slot_[i] = out_[e.src].size();
    out_[e.src].push_back(e.id);
    in_[e.dst].push_back(e.id);
  }
  for (NodeIndex u = 0; u < n; ++u) {
    if (outcomes_[u].empty() && out_[u].empty()) outcomes_[u].push_back(Outcome{1.0, {}, std::nullopt});
    for (const auto& o : outcomes_[u]) {
      if (o.values.size() != out_[u].size()) {
        throw InvalidInstance("outcome at node '" + node_names_[u] +
                              "' has a value vector of the wrong length");
      }
    }
  }
}

std::optional<NodeIndex> Instance::find_node(const std::string& name) const {
  auto it = std::find(node_names_.begin(), node_names_.end(), name);
  if (it == node_names_.end()) return std::nullopt;
  return static_cast<NodeIndex>(it - node_names_.begin());
}

double Instance::mean_value(EdgeId e) const {
  const auto& table = outcomes_[edges_[e].src];
  CompensatedSum s;
  for (const auto& o : table) s += o.mass * o.values[slot_[e]];
  return s.value();
}

std::size_t Instance::max_labels() const noexcept {
  std::size_t d = 0;
  for (const auto& e : edges_) d = std::max(d, e.labels.size());
  return d;
}

bool Instance::has_labels() const noexcept { return max_labels() > 0; }

std::size_t Instance::label_multiplicity(LabelIndex l) const {
  std::size_t count = 0;
  for (const auto& e : edges_) {
    count += static_cast<std::size_t>(std::binary_search(e.labels.begin(), e.labels.end(), l));
  }
  return count;
}

// ---------------------------------------------------------------------------

NodeIndex InstanceBuilder::add_node(std::string name) {
  nodes_.push_back(std::move(name));
  return nodes_.size() - 1;
}

LabelIndex InstanceBuilder::add_label(std::string name, int capacity) {
  labels_.push_back(Label{std::move(name), capacity});
  return labels_.size() - 1;
}

EdgeId InstanceBuilder::add_edge(NodeIndex src, NodeIndex dst, std::vector<LabelIndex> labels) {
  const EdgeId id = edges_.size();
  edges_.push_back(EdgeDef{id, src, dst, std::move(labels)});
  return id;
}

void InstanceBuilder::add_outcome(NodeIndex u, double mass, const std::map<EdgeId, double>& values) {
  outcomes_[u].push_back(PendingOutcome{mass, values});
}

void InstanceBuilder::set_independent(NodeIndex u,
                                      const std::vector<std::pair<EdgeId, DiscreteLaw>>& laws) {
  std::vector<PendingOutcome> rows{PendingOutcome{1.0, {}}};
  for (const auto& [edge, law] : laws) {
    std::vector<PendingOutcome> next;
    for (const auto& row : rows) {
      for (const auto& [mass, value] : law) {
        PendingOutcome r = row;
        r.mass *= mass;
        r.values[edge] = value;
        next.push_back(std::move(r));
      }
    }
    rows = std::move(next);
  }
  outcomes_[u] = std::move(rows);
}

void InstanceBuilder::set_shared_draw(NodeIndex u, const DiscreteLaw& law,
                                      const std::map<EdgeId, double>& multiplier) {
  std::vector<PendingOutcome> rows;
  for (const auto& [mass, v] : law) {
    PendingOutcome r{mass, {}};
    for (const auto& [edge, m] : multiplier) r.values[edge] = m * v;
    rows.push_back(std::move(r));
  }
  outcomes_[u] = std::move(rows);
}

Instance InstanceBuilder::build() const {
  std::vector<std::vector<Outcome>> tables(nodes_.size());
  std::vector<std::vector<EdgeId>> out(nodes_.size());
  for (const auto& e : edges_) {
    if (e.src < nodes_.size()) out[e.src].push_back(e.id);
  }
  for (NodeIndex u = 0; u < nodes_.size(); ++u) {
    auto it = outcomes_.find(u);
    if (it == outcomes_.end()) {
      // deterministic zero values
      tables[u].push_back(Outcome{1.0, std::vector<double>(out[u].size(), 0.0), std::nullopt});
      continue;
    }
    for (const auto& pending : it->second) {
      Outcome o{pending.mass, std::vector<double>(out[u].size(), 0.0), std::nullopt};
      for (const auto& [edge, value] : pending.values) {
        auto pos = std::find(out[u].begin(), out[u].end(), edge);
        if (pos == out[u].end()) {
          throw InvalidInstance("outcome value for edge " + std::to_string(edge) +
                                " which does not leave node '" + nodes_[u] + "'");
        }
        o.values[static_cast<std::size_t>(pos - out[u].begin())] = value;
      }
      tables[u].push_back(std::move(o));
    }
  }
  return Instance(nodes_, labels_, edges_, std::move(tables));
}

// ---------------------------------------------------------------------------

bool ValidationReport::has(const std::string& kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

namespace {

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

bool has_cycle(const Instance& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> indeg(n, 0);
  for (const auto& e : g.edges()) ++indeg[e.dst];
  std::deque<NodeIndex> ready;
  for (NodeIndex u = 0; u < n; ++u) {
    if (indeg[u] == 0) ready.push_back(u);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const NodeIndex u = ready.front();
    ready.pop_front();
    ++visited;
    for (EdgeId e : g.out_edges(u)) {
      if (--indeg[g.edge(e).dst] == 0) ready.push_back(g.edge(e).dst);
    }
  }
  return visited != n;
}

std::vector<bool> reachable_from(const Instance& g, NodeIndex start, bool forward) {
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeIndex> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const NodeIndex u = stack.back();
    stack.pop_back();
    const auto& adj = forward ? g.out_edges(u) : g.in_edges(u);
    for (EdgeId e : adj) {
      const NodeIndex v = forward ? g.edge(e).dst : g.edge(e).src;
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

ValidationReport validate_instance(const Instance& g, std::uint64_t state_cap) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string msg) {
    report.violations.push_back(Violation{std::move(kind), std::move(msg)});
  };
  const std::size_t n = g.node_count();

  if (has_cycle(g)) {
    add("cycle", "graph contains a directed cycle");
  } else {
    for (const auto& e : g.edges()) {
      if (e.src >= e.dst) {
        add("order", "edge " + std::to_string(e.id) + " goes against the stored topological order");
      }
    }
  }

  const auto from_s = reachable_from(g, g.source(), true);
  const auto to_t = reachable_from(g, g.sink(), false);
  for (NodeIndex u = 0; u < n; ++u) {
    if (!from_s[u]) add("unreachable", "node '" + g.node_name(u) + "' is not reachable from s");
    if (!to_t[u]) add("dead-end", "node '" + g.node_name(u) + "' does not reach t");
  }

  for (const auto& e : g.edges()) {
    if (!e.labeled()) continue;
    bool twin = false;
    for (EdgeId f : g.out_edges(e.src)) {
      const auto& other = g.edge(f);
      if (other.dst == e.dst && !other.labeled()) twin = true;
    }
    if (!twin) {
      add("missing-parallel-unlabeled-edge",
          "labeled edge " + std::to_string(e.id) + " (" + g.node_name(e.src) + "->" +
              g.node_name(e.dst) + ") has no parallel unlabeled edge");
    }
  }

  for (LabelIndex l = 0; l < g.label_count(); ++l) {
    if (g.label(l).capacity < 1) {
      add("capacity", "label '" + g.label(l).name + "' has capacity < 1");
    }
  }

  for (NodeIndex u = 0; u < n; ++u) {
    const auto& table = g.outcomes(u);
    if (table.empty()) {
      add("missing-outcomes", "node '" + g.node_name(u) + "' has no outcome table");
      continue;
    }
    CompensatedSum total;
    bool all_exact = true;
    std::vector<std::int64_t> nums;
    std::vector<std::int64_t> dens;
    for (const auto& o : table) {
      total += o.mass;
      if (!(o.mass > 0.0 && o.mass <= 1.0 + kTolerance)) {
        add("bad-mass", "node '" + g.node_name(u) + "' has an outcome mass " + fmt_double(o.mass) +
                            " outside (0,1]");
      }
      if (o.exact_mass) {
        nums.push_back(o.exact_mass->first);
        dens.push_back(o.exact_mass->second);
      } else {
        all_exact = false;
      }
      for (std::size_t j = 0; j < o.values.size(); ++j) {
        const double w = o.values[j];
        if (!std::isfinite(w)) {
          add("non-finite-value", "edge " + std::to_string(g.out_edges(u)[j]) + " has a non-finite value");
        } else if (w < 0.0) {
          add("negative-value", "edge " + std::to_string(g.out_edges(u)[j]) + " has negative value " +
                                    fmt_double(w));
        }
      }
    }
    const bool sums_to_one = all_exact ? rationals_sum_to_one(nums, dens)
                                       : std::fabs(total.value() - 1.0) <= kTolerance;
    if (!sums_to_one) {
      add("mass-sum", "node '" + g.node_name(u) + "': masses sum to " + fmt_double(total.value()) +
                          " ≠ 1");
    }
  }

  // capacity DP state space
  double states = 1.0;
  for (LabelIndex l = 0; l < g.label_count(); ++l) {
    const auto mult = g.label_multiplicity(l);
    if (mult > static_cast<std::size_t>(std::max(0, g.label(l).capacity))) {
      states *= static_cast<double>(g.label(l).capacity + 1);
    }
  }
  if (states * static_cast<double>(n) > static_cast<double>(state_cap)) {
    report.warnings.push_back("capacity state space (" + fmt_double(states) +
                              " states per node) exceeds the enumeration cap");
  }
  return report;
}

void require_valid(const Instance& g) {
  const auto report = validate_instance(g);
  if (report.ok()) return;
  std::string msg = "instance violates model assumptions:";
  for (const auto& v : report.violations) msg += "\n  [" + v.kind + "] " + v.message;
  throw InvalidInstance(msg);
}

// ---------------------------------------------------------------------------

std::uint64_t realization_count(const Instance& g) {
  std::uint64_t total = 1;
  for (NodeIndex u = 0; u < g.node_count(); ++u) {
    const std::uint64_t k = g.outcomes(u).size();
    if (k == 0) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / k) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= k;
  }
  return total;
}

RealizationEnumerator::RealizationEnumerator(const Instance& g, std::uint64_t cap)
    : g_(&g), cursor_(g.node_count(), 0) {
  const auto count = realization_count(g);
  if (count > cap) {
    throw EnumerationTooLarge("enumeration too large (" + std::to_string(count) +
                              " realizations > cap " + std::to_string(cap) +
                              "), use Monte Carlo");
  }
  done_ = count == 0;
}

bool RealizationEnumerator::next(Realization& out) {
  if (done_) return false;
  if (started_) {
    std::size_t u = 0;
    for (; u < cursor_.size(); ++u) {
      if (++cursor_[u] < g_->outcomes(u).size()) break;
      cursor_[u] = 0;
    }
    if (u == cursor_.size()) {
      done_ = true;
      return false;
    }
  }
  started_ = true;
  out.outcome = cursor_;
  double mass = 1.0;
  for (NodeIndex v = 0; v < cursor_.size(); ++v) mass *= g_->outcomes(v)[cursor_[v]].mass;
  out.mass = mass;
  return true;
}

RealizationSampler::RealizationSampler(const Instance& g) : g_(&g), masses_(g.node_count()) {
  for (NodeIndex u = 0; u < g.node_count(); ++u) {
    for (const auto& o : g.outcomes(u)) masses_[u].push_back(o.mass);
  }
}

Realization RealizationSampler::sample(Rng& rng) const {
  Realization r;
  r.outcome.resize(g_->node_count());
  r.mass = 1.0;
  for (NodeIndex u = 0; u < g_->node_count(); ++u) {
    r.outcome[u] = static_cast<std::uint32_t>(sample_index(masses_[u], rng));
    r.mass *= masses_[u][r.outcome[u]];
  }
  return r;
}

void RealizationSampler::resample_node(Realization& r, NodeIndex u, Rng& rng) const {
  r.mass /= masses_[u][r.outcome[u]];
  r.outcome[u] = static_cast<std::uint32_t>(sample_index(masses_[u], rng));
  r.mass *= masses_[u][r.outcome[u]];
}

// ---------------------------------------------------------------------------

std::vector<std::vector<bool>> transitive_closure(const Instance& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (NodeIndex u = n; u-- > 0;) {
    reach[u][u] = true;
    for (EdgeId e : g.out_edges(u)) {
      const NodeIndex v = g.edge(e).dst;
      if (v <= u) continue;  // only meaningful on valid (topologically ordered) instances
      for (NodeIndex w = 0; w < n; ++w) {
        if (reach[v][w]) reach[u][w] = true;
      }
    }
  }
  return reach;
}

std::optional<std::vector<EdgeId>> fewest_edge_path(const Instance& g, NodeIndex from,
                                                    NodeIndex to, bool unlabeled_only) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> via(n, kNone);
  std::vector<bool> seen(n, false);
  std::deque<NodeIndex> queue{from};
  seen[from] = true;
  while (!queue.empty() && !seen[to]) {
    const NodeIndex u = queue.front();
    queue.pop_front();
    for (EdgeId e : g.out_edges(u)) {
      const auto& def = g.edge(e);
      if (unlabeled_only && def.labeled()) continue;
      if (seen[def.dst]) continue;
      seen[def.dst] = true;
      via[def.dst] = e;
      queue.push_back(def.dst);
    }
  }
  if (!seen[to]) return std::nullopt;
  std::vector<EdgeId> path;
  for (NodeIndex v = to; v != from; v = g.edge(via[v]).src) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<NodeIndex> path_nodes(const Instance& g, const std::vector<EdgeId>& path) {
  std::vector<NodeIndex> nodes;
  if (path.empty()) return nodes;
  nodes.push_back(g.edge(path.front()).src);
  for (EdgeId e : path) nodes.push_back(g.edge(e).dst);
  return nodes;
}

bool is_st_path(const Instance& g, const std::vector<EdgeId>& path) {
  if (path.empty()) return false;
  NodeIndex at = g.source();
  for (EdgeId e : path) {
    if (e >= g.edge_count() || g.edge(e).src != at) return false;
    at = g.edge(e).dst;
  }
  return at == g.sink();
}

}  // namespace prophet
