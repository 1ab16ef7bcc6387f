#pragma once

// Stochastic DAG instances: graph structure, labels with capacities, and
// per-node finite outcome tables. Edges leaving different nodes are
// independent; edges leaving the same node are correlated through the
// node's outcome table.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "prophet/numeric.hpp"

namespace prophet {

using NodeIndex = std::size_t;
using EdgeId = std::size_t;
using LabelIndex = std::size_t;

struct EdgeDef {
  EdgeId id = 0;
  NodeIndex src = 0;
  NodeIndex dst = 0;
  std::vector<LabelIndex> labels;

  bool labeled() const noexcept { return !labels.empty(); }
};

struct Label {
  std::string name;
  int capacity = 1;
};

/// One row of a node's outcome table. `values[j]` is the value of the j-th
/// outgoing edge of the node (in `Instance::out_edges` order).
struct Outcome {
  double mass = 1.0;
  std::vector<double> values;
  // Set when the mass was given as an exact fraction.
  std::optional<std::pair<std::int64_t, std::int64_t>> exact_mass;
};

/// Finite-support law of a single scalar: (mass, value) pairs.
using DiscreteLaw = std::vector<std::pair<double, double>>;

/// Two-point law: 1/eps with probability eps, 0 otherwise.
DiscreteLaw bernoulli_law(double eps);
DiscreteLaw constant_law(double value);

/// Immutable after construction. Node 0 is s, the last node is t, and the
/// node vector is the stored topological order.
class Instance {
 public:
  Instance() = default;
  /// Throws InvalidInstance on schema errors (dangling indices, wrong value
  /// vector lengths, non-dense edge ids). Model-level assumptions are left to
  /// validate_instance.
  Instance(std::vector<std::string> node_names, std::vector<Label> labels,
           std::vector<EdgeDef> edges, std::vector<std::vector<Outcome>> outcomes);

  std::size_t node_count() const noexcept { return node_names_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t label_count() const noexcept { return labels_.size(); }
  NodeIndex source() const noexcept { return 0; }
  NodeIndex sink() const noexcept { return node_names_.empty() ? 0 : node_names_.size() - 1; }

  const std::string& node_name(NodeIndex u) const { return node_names_.at(u); }
  std::optional<NodeIndex> find_node(const std::string& name) const;
  const std::vector<std::string>& node_names() const noexcept { return node_names_; }

  const EdgeDef& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<EdgeDef>& edges() const noexcept { return edges_; }
  const Label& label(LabelIndex l) const { return labels_.at(l); }
  const std::vector<Label>& labels() const noexcept { return labels_; }

  /// Outgoing edge ids of `u`, ascending.
  const std::vector<EdgeId>& out_edges(NodeIndex u) const { return out_.at(u); }
  const std::vector<EdgeId>& in_edges(NodeIndex u) const { return in_.at(u); }
  /// Position of edge `e` within out_edges(src(e)).
  std::size_t slot(EdgeId e) const { return slot_.at(e); }

  const std::vector<Outcome>& outcomes(NodeIndex u) const { return outcomes_.at(u); }
  double value(EdgeId e, std::size_t outcome) const {
    return outcomes_[edges_[e].src][outcome].values[slot_[e]];
  }
  /// Mean of w_e under its node's law.
  double mean_value(EdgeId e) const;

  /// d: the largest number of labels on any edge.
  std::size_t max_labels() const noexcept;
  bool has_labels() const noexcept;
  /// Number of edges carrying label `l`.
  std::size_t label_multiplicity(LabelIndex l) const;

 private:
  std::vector<std::string> node_names_;
  std::vector<Label> labels_;
  std::vector<EdgeDef> edges_;
  std::vector<std::vector<Outcome>> outcomes_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::vector<std::size_t> slot_;
};

/// Incremental construction; nodes must be added in topological order.
class InstanceBuilder {
 public:
  NodeIndex add_node(std::string name);
  LabelIndex add_label(std::string name, int capacity);
  EdgeId add_edge(NodeIndex src, NodeIndex dst, std::vector<LabelIndex> labels = {});
  /// Values for edges not listed default to 0.
  void add_outcome(NodeIndex u, double mass, const std::map<EdgeId, double>& values);
  /// Node table as the product of independent per-edge laws. Edges not listed are 0.
  void set_independent(NodeIndex u, const std::vector<std::pair<EdgeId, DiscreteLaw>>& laws);
  /// Every outgoing edge of `u` takes `multiplier[e] * v` for one shared draw v ~ law.
  void set_shared_draw(NodeIndex u, const DiscreteLaw& law, const std::map<EdgeId, double>& multiplier);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  Instance build() const;

 private:
  struct PendingOutcome {
    double mass;
    std::map<EdgeId, double> values;
  };
  std::vector<std::string> nodes_;
  std::vector<Label> labels_;
  std::vector<EdgeDef> edges_;
  std::map<NodeIndex, std::vector<PendingOutcome>> outcomes_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
  bool ok() const noexcept { return violations.empty(); }
  bool has(const std::string& kind) const;
};

ValidationReport validate_instance(const Instance& g,
                                   std::uint64_t state_cap = kDefaultEnumerationCap);
/// Throws InvalidInstance listing every violation.
void require_valid(const Instance& g);

// ---------------------------------------------------------------------------
// Realizations

/// One outcome index per node. `mass` is the product of the chosen masses.
struct Realization {
  std::vector<std::uint32_t> outcome;
  double mass = 1.0;

  double value(const Instance& g, EdgeId e) const {
    return g.value(e, outcome[g.edge(e).src]);
  }
};

/// Product of per-node outcome counts, saturating at UINT64_MAX.
std::uint64_t realization_count(const Instance& g);

/// Odometer over every realization. Throws EnumerationTooLarge when the
/// product of outcome counts exceeds the cap.
class RealizationEnumerator {
 public:
  explicit RealizationEnumerator(const Instance& g, std::uint64_t cap = kDefaultEnumerationCap);
  /// Writes the next realization into `out`; false once exhausted.
  bool next(Realization& out);

 private:
  const Instance* g_;
  std::vector<std::uint32_t> cursor_;
  bool done_ = false;
  bool started_ = false;
};

template <class Fn>
void for_each_realization(const Instance& g, std::uint64_t cap, Fn&& fn) {
  RealizationEnumerator it(g, cap);
  Realization r;
  while (it.next(r)) fn(static_cast<const Realization&>(r));
}

/// Draws each node's outcome independently with probability equal to its mass.
class RealizationSampler {
 public:
  explicit RealizationSampler(const Instance& g);
  Realization sample(Rng& rng) const;
  void resample_node(Realization& r, NodeIndex u, Rng& rng) const;

 private:
  const Instance* g_;
  std::vector<std::vector<double>> masses_;
};

// ---------------------------------------------------------------------------
// Graph helpers

/// reach[u][v] is true when there is a directed path (possibly empty) from u to v.
std::vector<std::vector<bool>> transitive_closure(const Instance& g);

/// Fewest-edge path from `from` to `to`, ties broken by smallest edge ids.
/// With `unlabeled_only`, labeled edges are ignored.
std::optional<std::vector<EdgeId>> fewest_edge_path(const Instance& g, NodeIndex from,
                                                    NodeIndex to, bool unlabeled_only);

/// Nodes visited by an edge sequence starting at src of its first edge.
std::vector<NodeIndex> path_nodes(const Instance& g, const std::vector<EdgeId>& path);
/// True when `path` is a contiguous walk from s to t.
bool is_st_path(const Instance& g, const std::vector<EdgeId>& path);

}  // namespace prophet
