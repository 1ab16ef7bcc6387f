#include "prophet/disjoint.hpp"

#include <algorithm>
#include <optional>

#include "prophet/errors.hpp"

namespace prophet {

DisjointPlan build_disjoint_plan(const Instance& g, const PathCover& cover, std::uint64_t cap) {
  if (g.has_labels()) throw InvalidArgument("disjoint-paths plan requires an unlabeled instance");
  if (!is_valid_cover(g, cover)) throw InvalidArgument("invalid cover");
  const NodeIndex s = g.source();
  const NodeIndex t = g.sink();
  const std::size_t k = cover.size();

  std::vector<std::optional<std::size_t>> strand_of(g.node_count());
  for (std::size_t i = 0; i < k; ++i) {
    for (NodeIndex v : cover.node_orders[i]) {
      if (v == s || v == t) continue;
      if (strand_of[v] && *strand_of[v] != i) {
        throw InvalidArgument("cover paths are not node-disjoint at '" + g.node_name(v) + "'");
      }
      strand_of[v] = i;
    }
  }

  DisjointPlan plan;
  plan.cover = cover;
  plan.owner.assign(g.edge_count(), 0);
  for (const auto& e : g.edges()) {
    if (e.src == s && e.dst == t) {
      plan.owner[e.id] = 0;
    } else if (e.src == s) {
      plan.owner[e.id] = *strand_of[e.dst];
    } else {
      const std::size_t i = *strand_of[e.src];
      if (e.dst != t && strand_of[e.dst] != i) {
        throw InvalidArgument("edge " + std::to_string(e.id) + " crosses from strand " + std::to_string(i) +
                              " to another strand; the cover is not strand-closed");
      }
      plan.owner[e.id] = i;
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (EdgeId e : cover.paths[i]) {
      if (plan.owner[e] != i) {
        throw InvalidArgument("cover path " + std::to_string(i) + " uses an edge owned by another part");
      }
    }
  }

  std::vector<CompensatedSum> f(k);
  std::vector<CompensatedSum> q(k);
  std::vector<CompensatedSum> value(k);
  for_each_selection(g, OfflineSpec::opt(), cap, [&](const Realization& r, const PathSelection& sel) {
    const std::size_t part = plan.owner[sel.edges.front()];
    for (EdgeId e : sel.edges) {
      if (plan.owner[e] != part) throw InternalError("OPT path straddles two parts");
    }
    f[part] += r.mass;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == part) {
        value[i] += r.mass * sel.value;
        if (sel.edges == cover.paths[i]) q[i] += r.mass;
      } else {
        double v = 0.0;
        for (EdgeId e : cover.paths[i]) v += r.value(g, e);
        value[i] += r.mass * v;
        q[i] += r.mass;
      }
    }
  });

  for (std::size_t i = 0; i < k; ++i) {
    std::vector<bool> allowed(g.edge_count(), false);
    for (EdgeId e = 0; e < g.edge_count(); ++e) allowed[e] = plan.owner[e] == i;
    plan.specs.push_back(OfflineSpec::restricted(std::move(allowed), cover.paths[i]));
    plan.f.push_back(f[i].value());
    plan.q.push_back(std::min(1.0, q[i].value()));
    plan.expected_opt_restricted.push_back(value[i].value());
    plan.certified.push_back(plan.expected_opt_restricted.back() / (2.0 - plan.q.back()));
  }
  plan.best = static_cast<std::size_t>(
      std::max_element(plan.certified.begin(), plan.certified.end()) - plan.certified.begin());
  return plan;
}

}  // namespace prophet
