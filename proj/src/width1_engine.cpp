#include <algorithm>
#include <cmath>

#include "prophet/errors.hpp"
#include "prophet/policies.hpp"

namespace prophet {

double checked_probability(double p, const char* what) {
  if (p < -kTolerance || p > 1.0 + kTolerance || std::isnan(p)) {
    throw InternalError(std::string(what) + " = " + std::to_string(p) + " lies outside [0,1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

FocalPath make_focal_path(const Instance& g, const std::vector<EdgeId>& edges, bool require_full_cover) {
  if (!is_st_path(g, edges)) throw InvalidArgument("focal path is not an s,t-path");
  FocalPath f;
  f.edges = edges;
  f.nodes = path_nodes(g, edges);
  f.position.assign(g.node_count(), std::nullopt);
  for (std::size_t i = 0; i < f.nodes.size(); ++i) f.position[f.nodes[i]] = i;
  if (require_full_cover && f.nodes.size() != g.node_count()) {
    throw InvalidArgument("focal path does not visit every node (graph is not width 1 along it)");
  }
  return f;
}

Width1Evaluation evaluate_width1(const Instance& g, const FocalPath& focal, const SelectionProfile& law,
                                 const AcceptanceRule& acceptance, std::uint64_t state_cap) {
  const CapacitySpace caps(g, state_cap);
  const std::size_t states = caps.size();
  const std::size_t m = g.edge_count();

  Width1Evaluation ev;
  ev.take_prob.assign(m, 0.0);
  ev.tentative_take_prob.assign(m, 0.0);
  ev.visit_prob.assign(g.node_count(), 0.0);
  ev.feasible_prob.assign(m, 0.0);
  ev.acceptance.assign(m, 1.0);

  std::vector<std::vector<CompensatedSum>> mass(focal.nodes.size(), std::vector<CompensatedSum>(states));
  std::vector<CompensatedSum> take(m);
  std::vector<CompensatedSum> tentative_take(m);
  CompensatedSum value;
  mass[0][caps.full()] += 1.0;

  for (std::size_t pos = 0; pos + 1 < focal.nodes.size(); ++pos) {
    const NodeIndex u = focal.nodes[pos];
    const EdgeId path_edge = focal.edges[pos];
    const auto& out = g.out_edges(u);

    std::vector<double> here(states);
    CompensatedSum visit;
    for (std::size_t c = 0; c < states; ++c) {
      here[c] = mass[pos][c].value();
      visit += here[c];
    }
    ev.visit_prob[u] = visit.value();

    for (EdgeId e : out) {
      CompensatedSum feasible;
      for (std::size_t c = 0; c < states; ++c) {
        if (caps.feasible(c, e)) feasible += here[c];
      }
      ev.feasible_prob[e] = feasible.value();
      if (e != path_edge) ev.acceptance[e] = acceptance(e, ev.feasible_prob[e]);
    }

    auto move = [&](EdgeId e, std::size_t c, std::size_t outcome, double w, bool tentative) {
      if (w == 0.0) return;
      const NodeIndex v = g.edge(e).dst;
      if (!focal.contains(v) || *focal.position[v] <= pos) {
        throw InternalError("policy would leave the focal path along edge " + std::to_string(e));
      }
      take[e] += w;
      if (tentative) tentative_take[e] += w;
      value += w * g.value(e, outcome);
      mass[*focal.position[v]][caps.take(c, e)] += w;
    };

    for (std::size_t c = 0; c < states; ++c) {
      if (here[c] == 0.0) continue;
      for (std::size_t o = 0; o < g.outcomes(u).size(); ++o) {
        const double base = here[c] * g.outcomes(u)[o].mass;
        const auto& pi = law.law(u, o);
        for (std::size_t j = 0; j < pi.size(); ++j) {
          if (pi[j] == 0.0) continue;
          const double w = base * pi[j];
          if (j == out.size()) {
            move(path_edge, c, o, w, false);
            continue;
          }
          const EdgeId e = out[j];
          if (e == path_edge) {
            move(path_edge, c, o, w, true);
          } else if (caps.feasible(c, e)) {
            const double a = ev.acceptance[e];
            move(e, c, o, w * a, true);
            move(path_edge, c, o, w * (1.0 - a), false);
          } else {
            move(path_edge, c, o, w, false);
          }
        }
      }
    }
  }
  CompensatedSum at_sink;
  for (const auto& s : mass.back()) at_sink += s.value();
  ev.visit_prob[focal.nodes.back()] = at_sink.value();

  ev.value = value.value();
  for (EdgeId e = 0; e < m; ++e) {
    ev.take_prob[e] = take[e].value();
    ev.tentative_take_prob[e] = tentative_take[e].value();
  }
  return ev;
}

namespace {

Trajectory run_width1_impl(const Instance& g, const FocalPath& focal, const SelectionProfile& law,
                           std::span<const double> acceptance, const std::vector<double>* feasible_prob,
                           const Realization& r, Rng& rng) {
  Trajectory traj;
  std::vector<int> residual(g.label_count());
  for (LabelIndex l = 0; l < g.label_count(); ++l) residual[l] = g.label(l).capacity;

  NodeIndex u = g.source();
  while (u != g.sink()) {
    if (!focal.contains(u)) throw InternalError("run left the focal path at node " + g.node_name(u));
    const std::size_t pos = *focal.position[u];
    const EdgeId path_edge = focal.edges[pos];
    const auto& out = g.out_edges(u);

    Decision d;
    d.node = u;
    d.outcome = r.outcome[u];
    const std::size_t j = sample_index(law.law(u, d.outcome), rng);
    EdgeId action = path_edge;
    if (j < out.size()) {
      const EdgeId e = out[j];
      d.tentative = e;
      if (e != path_edge) {
        d.feasible = std::all_of(g.edge(e).labels.begin(), g.edge(e).labels.end(),
                                 [&](LabelIndex l) { return residual[l] > 0; });
        if (d.feasible) {
          if (feasible_prob && (*feasible_prob)[e] <= 0.0) {
            throw InternalError("p(e) = 0 for tentative edge " + std::to_string(e) +
                                " that is feasible at run time");
          }
          d.coin_probability = acceptance[e];
          d.coin = uniform01(rng) < acceptance[e];
          if (*d.coin) action = e;
        }
      }
    }
    for (LabelIndex l : g.edge(action).labels) {
      if (--residual[l] < 0) throw InternalError("capacity exceeded");
    }
    d.action = action;
    d.value = r.value(g, action);
    traj.edges.push_back(action);
    traj.value += d.value;
    traj.decisions.push_back(d);
    u = g.edge(action).dst;
  }
  return traj;
}

}  // namespace

Trajectory run_width1(const Instance& g, const FocalPath& focal, const SelectionProfile& law,
                      std::span<const double> acceptance, const Realization& r, Rng& rng) {
  return run_width1_impl(g, focal, law, acceptance, nullptr, r, rng);
}

Trajectory run_width1_labeled(const Instance& g, const FocalPath& focal, const SelectionProfile& law,
                              const FeasibilityProbs& probs, const Realization& r, Rng& rng) {
  return run_width1_impl(g, focal, law, probs.acceptance, &probs.p, r, rng);
}

}  // namespace prophet
