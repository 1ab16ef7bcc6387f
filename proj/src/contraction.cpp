#include "prophet/contraction.hpp"

#include <algorithm>

#include "prophet/errors.hpp"

namespace prophet {

namespace {

std::vector<bool> unlabeled_reach(const Instance& g, NodeIndex from) {
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeIndex> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const NodeIndex u = stack.back();
    stack.pop_back();
    for (EdgeId e : g.out_edges(u)) {
      const auto& def = g.edge(e);
      if (def.labeled() || seen[def.dst]) continue;
      seen[def.dst] = true;
      stack.push_back(def.dst);
    }
  }
  return seen;
}

}  // namespace

ContractedInstance build_contracted_instance(const Instance& g, const PathCover& cover, std::size_t index) {
  if (index >= cover.size()) throw InvalidArgument("cover index out of range");
  const auto& order = cover.node_orders[index];
  std::vector<std::optional<std::size_t>> local(g.node_count());
  for (std::size_t i = 0; i < order.size(); ++i) local[order[i]] = i;

  ContractedInstance ci;
  ci.cover_index = index;
  ci.to_original_node = order;

  std::vector<std::string> names;
  for (NodeIndex u : order) names.push_back(g.node_name(u));

  std::vector<EdgeDef> edges;
  std::vector<std::optional<EdgeId>> contracted_of(g.edge_count());
  for (const auto& e : g.edges()) {
    if (!local[e.src]) continue;
    const EdgeId id = edges.size();
    contracted_of[e.id] = id;
    ci.to_original_edge.push_back(e.id);
    if (local[e.dst]) {
      edges.push_back(EdgeDef{id, *local[e.src], *local[e.dst], e.labels});
      ci.artificial_of.push_back(std::nullopt);
      continue;
    }
    const auto reach = unlabeled_reach(g, e.dst);
    std::optional<NodeIndex> target;
    for (NodeIndex v : order) {
      if (reach[v]) {
        target = v;
        break;
      }
    }
    if (!target) {
      throw InvalidInstance("node '" + g.node_name(e.dst) + "' has no unlabeled route back to cover path " +
                            std::to_string(index));
    }
    auto connector = fewest_edge_path(g, e.dst, *target, /*unlabeled_only=*/true);
    ArtificialEdge a{id, e.id, e.dst, *target, std::move(*connector)};
    edges.push_back(EdgeDef{id, *local[e.src], *local[*target], e.labels});
    ci.artificial_of.push_back(ci.artificial.size());
    ci.artificial.push_back(std::move(a));
  }

  // out-edges of each kept node map one-to-one and in the same order, so
  // every outcome row carries over unchanged
  std::vector<std::vector<Outcome>> tables;
  for (NodeIndex u : order) tables.push_back(g.outcomes(u));

  for (EdgeId e : cover.paths[index]) ci.focal.push_back(*contracted_of[e]);
  ci.graph = Instance(std::move(names), g.labels(), std::move(edges), std::move(tables));
  return ci;
}

Realization ContractedInstance::restrict(const Realization& r) const {
  Realization out;
  out.mass = 1.0;
  for (std::size_t i = 0; i < to_original_node.size(); ++i) {
    out.outcome.push_back(r.outcome[to_original_node[i]]);
    out.mass *= graph.outcomes(i)[out.outcome.back()].mass;
  }
  return out;
}

std::vector<EdgeId> ContractedInstance::expand(const std::vector<EdgeId>& contracted_path) const {
  std::vector<EdgeId> out;
  for (EdgeId e : contracted_path) {
    out.push_back(to_original_edge[e]);
    if (const auto a = artificial_of[e]) {
      const auto& c = artificial[*a].connector;
      out.insert(out.end(), c.begin(), c.end());
    }
  }
  return out;
}

}  // namespace prophet
