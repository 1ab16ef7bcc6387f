#include <algorithm>
#include <cmath>

#include "prophet/errors.hpp"
#include "prophet/policies.hpp"

namespace prophet {

std::vector<double> AlphaSchedule::acceptance(const Instance& g) const {
  std::vector<double> a(g.edge_count(), 0.0);
  for (const auto& e : g.edges()) {
    if (focal.contains(e.src)) a[e.id] = alpha[*focal.position[e.src]];
  }
  return a;
}

AlphaSchedule alpha_schedule(const Instance& g, const FocalPath& focal, const EdgeProbabilities& x,
                             double q) {
  if (!(q >= 0.0 && q <= 1.0 + kTolerance)) throw InvalidArgument("q must lie in [0,1]");
  if (x.x.size() != g.edge_count()) throw InvalidArgument("x has the wrong number of edges");
  q = std::min(q, 1.0);
  AlphaSchedule s;
  s.focal = focal;
  s.q = q;
  s.x = x.x;
  const std::size_t len = focal.nodes.size();
  s.alpha.assign(len, 0.0);
  s.skip_sets.assign(len, {});
  std::vector<CompensatedSum> skipped(len);
  for (const auto& e : g.edges()) {
    if (!focal.contains(e.src) || !focal.contains(e.dst)) {
      if (x.x[e.id] > kTolerance) {
        throw InternalError("x/q inconsistent with focal path: edge " + std::to_string(e.id) +
                            " leaves the path but has x_e > 0");
      }
      continue;
    }
    const std::size_t from = *focal.position[e.src];
    const std::size_t to = *focal.position[e.dst];
    for (std::size_t i = from + 1; i < to; ++i) {
      s.skip_sets[i].push_back(e.id);
      skipped[i] += x.x[e.id];
    }
  }
  const double scale = 2.0 - q;
  for (std::size_t i = 0; i < len; ++i) {
    const double denom = 1.0 - skipped[i].value() / scale;
    if (denom <= 0.0) {
      throw InternalError("x/q inconsistent with focal path: skip mass at position " +
                          std::to_string(i) + " is too large");
    }
    s.alpha[i] = checked_probability((1.0 / scale) / denom, "alpha (x/q inconsistent with focal path)");
  }
  return s;
}

Trajectory run_width1_unlabeled(const Instance& g, const AlphaSchedule& schedule,
                                const SelectionProfile& law, const Realization& r, Rng& rng) {
  if (g.has_labels()) throw InvalidArgument("run_width1_unlabeled requires an unlabeled instance");
  const auto a = schedule.acceptance(g);
  return run_width1(g, schedule.focal, law, a, r, rng);
}

Trajectory run_modified_width1(const Instance& g, const AlphaSchedule& schedule,
                               const SelectionProfile& off_law, const Realization& r, Rng& rng) {
  const auto a = schedule.acceptance(g);
  return run_width1(g, schedule.focal, off_law, a, r, rng);
}

Width1Evaluation evaluate_width1_unlabeled(const Instance& g, const AlphaSchedule& schedule,
                                           const SelectionProfile& law) {
  const auto a = schedule.acceptance(g);
  return evaluate_width1(g, schedule.focal, law, [&](EdgeId e, double) { return a[e]; });
}

Width1Evaluation evaluate_width1_labeled(const Instance& g, const FocalPath& focal,
                                         const SelectionProfile& law, const FeasibilityProbs& probs) {
  return evaluate_width1(g, focal, law, [&](EdgeId e, double) { return probs.acceptance[e]; });
}

namespace {

void check_labeled_focal(const Instance& g, const FocalPath& focal) {
  for (EdgeId e : focal.edges) {
    if (g.edge(e).labeled()) throw InvalidArgument("focal path must consist of unlabeled edges");
  }
}

FeasibilityProbs exact_feasibility(const Instance& g, const FocalPath& focal, const SelectionProfile& law,
                                   std::size_t d, std::uint64_t state_cap) {
  const double floor = 1.0 / static_cast<double>(d + 2);
  FeasibilityProbs probs;
  probs.d = d;
  auto ev = evaluate_width1(
      g, focal, law,
      [&](EdgeId e, double p) {
        if (p < floor - kTolerance) {
          throw InternalError("p(e) = " + std::to_string(p) + " < 1/(d+2) for edge " + std::to_string(e) +
                              "; law or d inconsistent with the instance");
        }
        return checked_probability(floor / p, "acceptance 1/((d+2)p(e))");
      },
      state_cap);
  probs.p = std::move(ev.feasible_prob);
  probs.acceptance = std::move(ev.acceptance);
  probs.std_error.assign(g.edge_count(), 0.0);
  return probs;
}

FeasibilityProbs monte_carlo_feasibility(const Instance& g, const FocalPath& focal,
                                         const SelectionProfile& law, std::size_t d,
                                         const FeasibilityMode& mode) {
  if (mode.trials == 0) throw InvalidArgument("Monte Carlo feasibility needs trials >= 1");
  const CapacitySpace caps(g, mode.state_cap);
  const std::size_t n = mode.trials;
  const double nd = static_cast<double>(n);
  const double floor = 1.0 / static_cast<double>(d + 2);

  FeasibilityProbs probs;
  probs.d = d;
  probs.exact = false;
  probs.trials = mode.trials;
  probs.seed = mode.seed;
  probs.p.assign(g.edge_count(), 0.0);
  probs.std_error.assign(g.edge_count(), 0.0);
  probs.acceptance.assign(g.edge_count(), 1.0);

  // particles advance node by node in focal order
  std::vector<NodeIndex> at(n, g.source());
  std::vector<std::size_t> state(n, caps.full());
  Rng rng(mode.seed);
  std::vector<double> masses;
  for (std::size_t pos = 0; pos + 1 < focal.nodes.size(); ++pos) {
    const NodeIndex u = focal.nodes[pos];
    const EdgeId path_edge = focal.edges[pos];
    const auto& out = g.out_edges(u);
    for (EdgeId e : out) {
      std::size_t count = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (at[k] == u && caps.feasible(state[k], e)) ++count;
      }
      const double p = static_cast<double>(count) / nd;
      probs.p[e] = p;
      probs.std_error[e] = std::sqrt(p * (1.0 - p) / nd);
      if (e != path_edge) probs.acceptance[e] = p > 0.0 ? std::min(1.0, floor / p) : 1.0;
    }
    masses.clear();
    for (const auto& o : g.outcomes(u)) masses.push_back(o.mass);
    for (std::size_t k = 0; k < n; ++k) {
      if (at[k] != u) continue;
      const std::size_t o = sample_index(masses, rng);
      const std::size_t j = sample_index(law.law(u, o), rng);
      EdgeId action = path_edge;
      if (j < out.size() && out[j] != path_edge && caps.feasible(state[k], out[j])) {
        if (uniform01(rng) < probs.acceptance[out[j]]) action = out[j];
      }
      state[k] = caps.take(state[k], action);
      at[k] = g.edge(action).dst;
    }
  }
  return probs;
}

}  // namespace

FeasibilityProbs feasibility_probabilities(const Instance& g, const FocalPath& focal,
                                           const SelectionProfile& law, std::size_t d,
                                           const FeasibilityMode& mode) {
  check_labeled_focal(g, focal);
  if (d < g.max_labels()) throw InvalidArgument("d is smaller than the largest label set");
  if (mode.monte_carlo) return monte_carlo_feasibility(g, focal, law, d, mode);
  return exact_feasibility(g, focal, law, d, mode.state_cap);
}

}  // namespace prophet
