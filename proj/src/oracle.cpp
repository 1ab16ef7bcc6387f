#include "prophet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prophet/errors.hpp"

namespace prophet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double tie_slack(double x) { return 1e-12 * std::max(1.0, std::fabs(x)); }

}  // namespace

OfflineSpec OfflineSpec::restricted(std::vector<bool> allowed, std::vector<EdgeId> fallback) {
  OfflineSpec s;
  s.kind = Kind::OptRestricted;
  s.allowed = std::move(allowed);
  s.fallback = std::move(fallback);
  for (EdgeId e : s.fallback) {
    if (e >= s.allowed.size() || !s.allowed[e]) {
      throw InvalidArgument("restricted offline spec: fallback path leaves the allowed edge set");
    }
  }
  return s;
}

std::string OfflineSpec::describe() const {
  if (kind == Kind::Opt) return "OPT";
  std::string out = "OPT_RESTRICTED(fallback=[";
  for (std::size_t i = 0; i < fallback.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(fallback[i]);
  }
  return out + "])";
}

// ---------------------------------------------------------------------------

CapacitySpace::CapacitySpace(const Instance& g, std::uint64_t state_cap) {
  for (LabelIndex l = 0; l < g.label_count(); ++l) {
    const auto cap = static_cast<std::size_t>(std::max(0, g.label(l).capacity));
    if (g.label_multiplicity(l) > cap) tracked_.push_back(l);
  }
  std::size_t stride = 1;
  for (LabelIndex l : tracked_) {
    const auto radix = static_cast<std::size_t>(g.label(l).capacity) + 1;
    stride_.push_back(stride);
    radix_.push_back(radix);
    full_ += (radix - 1) * stride;
    if (static_cast<double>(stride) * static_cast<double>(radix) * static_cast<double>(g.node_count()) >
        static_cast<double>(state_cap)) {
      throw EnumerationTooLarge("capacity state space exceeds the cap " + std::to_string(state_cap));
    }
    stride *= radix;
  }
  size_ = stride;
  delta_.assign(g.edge_count(), 0);
  edge_tracked_.assign(g.edge_count(), {});
  for (const auto& e : g.edges()) {
    for (LabelIndex l : e.labels) {
      auto it = std::find(tracked_.begin(), tracked_.end(), l);
      if (it == tracked_.end()) continue;
      const auto idx = static_cast<std::size_t>(it - tracked_.begin());
      edge_tracked_[e.id].push_back(idx);
      delta_[e.id] += stride_[idx];
    }
  }
}

int CapacitySpace::residual(std::size_t state, std::size_t tracked_index) const {
  return static_cast<int>((state / stride_[tracked_index]) % radix_[tracked_index]);
}

bool CapacitySpace::feasible(std::size_t state, EdgeId e) const {
  for (std::size_t idx : edge_tracked_[e]) {
    if (residual(state, idx) == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

OptSolver::OptSolver(const Instance& g, std::uint64_t state_cap) : g_(&g), caps_(g, state_cap) {}

PathSelection OptSolver::finish(const Realization& r, std::vector<EdgeId> edges) const {
  PathSelection sel;
  sel.label_usage.assign(g_->label_count(), 0);
  for (EdgeId e : edges) {
    sel.value += r.value(*g_, e);
    for (LabelIndex l : g_->edge(e).labels) ++sel.label_usage[l];
  }
  sel.edges = std::move(edges);
  return sel;
}

PathSelection OptSolver::solve_unrestricted(const Realization& r) const {
  const std::size_t n = g_->node_count();
  const std::size_t states = caps_.size();
  std::vector<double> best(n * states, kNegInf);
  const NodeIndex t = g_->sink();
  for (std::size_t c = 0; c < states; ++c) best[t * states + c] = 0.0;
  for (NodeIndex u = t; u-- > 0;) {
    const auto& out = g_->out_edges(u);
    const std::size_t o = r.outcome[u];
    for (std::size_t c = 0; c < states; ++c) {
      double b = kNegInf;
      for (EdgeId e : out) {
        if (!caps_.feasible(c, e)) continue;
        const double tail = best[g_->edge(e).dst * states + caps_.take(c, e)];
        if (tail == kNegInf) continue;
        b = std::max(b, g_->value(e, o) + tail);
      }
      best[u * states + c] = b;
    }
  }
  std::size_t c = caps_.full();
  NodeIndex u = g_->source();
  if (best[u * states + c] == kNegInf) {
    throw InternalError("no feasible s,t-path exists for this realization");
  }
  std::vector<EdgeId> edges;
  while (u != t) {
    const double target = best[u * states + c];
    bool moved = false;
    for (EdgeId e : g_->out_edges(u)) {
      if (!caps_.feasible(c, e)) continue;
      const std::size_t next_c = caps_.take(c, e);
      const double tail = best[g_->edge(e).dst * states + next_c];
      if (tail == kNegInf) continue;
      if (g_->value(e, r.outcome[u]) + tail >= target - tie_slack(target)) {
        edges.push_back(e);
        u = g_->edge(e).dst;
        c = next_c;
        moved = true;
        break;
      }
    }
    if (!moved) throw InternalError("longest-path reconstruction failed");
  }
  return finish(r, std::move(edges));
}

PathSelection OptSolver::solve(const Realization& r, const OfflineSpec& spec) const {
  PathSelection sel = solve_unrestricted(r);
  if (spec.kind == OfflineSpec::Kind::Opt) return sel;
  const bool inside = std::all_of(sel.edges.begin(), sel.edges.end(), [&](EdgeId e) {
    return e < spec.allowed.size() && spec.allowed[e];
  });
  if (inside) return sel;
  return finish(r, spec.fallback);
}

PathSelection opt_path(const Instance& g, const Realization& r, const OfflineSpec& spec) {
  return OptSolver(g).solve(r, spec);
}

// ---------------------------------------------------------------------------

namespace {

struct ProfileAccumulator {
  std::vector<CompensatedSum> x;
  std::vector<std::vector<std::vector<CompensatedSum>>> choice;
  std::vector<std::vector<CompensatedSum>> denom;
  std::vector<std::size_t> used_slot;

  explicit ProfileAccumulator(const Instance& g)
      : x(g.edge_count()), choice(g.node_count()), denom(g.node_count()), used_slot(g.node_count()) {
    for (NodeIndex u = 0; u < g.node_count(); ++u) {
      const std::size_t k = g.outcomes(u).size();
      choice[u].assign(k, std::vector<CompensatedSum>(g.out_edges(u).size() + 1));
      denom[u].assign(k, CompensatedSum{});
    }
  }

  void mark(const Instance& g, const PathSelection& sel) {
    for (NodeIndex u = 0; u < g.node_count(); ++u) used_slot[u] = g.out_edges(u).size();
    for (EdgeId e : sel.edges) used_slot[g.edge(e).src] = g.slot(e);
  }
};

std::vector<std::vector<std::vector<double>>> normalise(const ProfileAccumulator& acc) {
  std::vector<std::vector<std::vector<double>>> out(acc.choice.size());
  for (std::size_t u = 0; u < acc.choice.size(); ++u) {
    out[u].resize(acc.choice[u].size());
    for (std::size_t o = 0; o < acc.choice[u].size(); ++o) {
      const double d = acc.denom[u][o].value();
      for (const auto& cell : acc.choice[u][o]) out[u][o].push_back(d > 0.0 ? cell.value() / d : 0.0);
    }
  }
  return out;
}

SelectionProfile exact_profile(const Instance& g, const OfflineSpec& spec, std::uint64_t cap) {
  ProfileAccumulator acc(g);
  CompensatedSum value;
  const OptSolver solver(g, cap);
  for_each_realization(g, cap, [&](const Realization& r) {
    const PathSelection sel = solver.solve(r, spec);
    value += r.mass * sel.value;
    for (EdgeId e : sel.edges) acc.x[e] += r.mass;
    acc.mark(g, sel);
    for (NodeIndex u = 0; u < g.node_count(); ++u) {
      acc.choice[u][r.outcome[u]][acc.used_slot[u]] += r.mass;
      acc.denom[u][r.outcome[u]] += r.mass;
    }
  });
  SelectionProfile p;
  p.spec = spec;
  p.value = Estimate{value.value(), 0.0, true, 0, 0};
  for (const auto& s : acc.x) p.edge_prob.push_back(s.value());
  p.choice = normalise(acc);
  return p;
}

SelectionProfile monte_carlo_profile(const Instance& g, const OfflineSpec& spec,
                                     const EnumerationOptions& options) {
  if (options.trials == 0) throw InvalidArgument("Monte Carlo mode needs trials >= 1");
  ProfileAccumulator acc(g);
  const OptSolver solver(g, options.cap);
  const RealizationSampler sampler(g);
  std::vector<double> values;
  values.reserve(options.trials);
  for (std::uint64_t j = 0; j < options.trials; ++j) {
    Rng rng(derive_seed(options.seed, j));
    Realization r = sampler.sample(rng);
    const PathSelection sel = solver.solve(r, spec);
    values.push_back(sel.value);
    for (EdgeId e : sel.edges) acc.x[e] += 1.0;
    // conditional laws: swap in each outcome of u while keeping the other nodes
    for (NodeIndex u = 0; u < g.node_count(); ++u) {
      const auto original = r.outcome[u];
      for (std::uint32_t o = 0; o < g.outcomes(u).size(); ++o) {
        std::size_t slot = g.out_edges(u).size();
        if (o == original) {
          for (EdgeId e : sel.edges) {
            if (g.edge(e).src == u) slot = g.slot(e);
          }
        } else {
          r.outcome[u] = o;
          const PathSelection alt = solver.solve(r, spec);
          for (EdgeId e : alt.edges) {
            if (g.edge(e).src == u) slot = g.slot(e);
          }
        }
        acc.choice[u][o][slot] += 1.0;
        acc.denom[u][o] += 1.0;
      }
      r.outcome[u] = original;
    }
  }
  const double n = static_cast<double>(options.trials);
  const double mean = pairwise_sum(values) / n;
  CompensatedSum sq;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double se = options.trials > 1 ? std::sqrt(sq.value() / (n - 1.0) / n) : 0.0;

  SelectionProfile p;
  p.spec = spec;
  p.value = Estimate{mean, se, false, options.trials, options.seed};
  for (const auto& s : acc.x) p.edge_prob.push_back(s.value() / n);
  p.choice = normalise(acc);
  return p;
}

}  // namespace

SelectionProfile selection_profile(const Instance& g, const OfflineSpec& spec,
                                   const EnumerationOptions& options) {
  if (options.monte_carlo) return monte_carlo_profile(g, spec, options);
  return exact_profile(g, spec, options.cap);
}

Estimate expected_opt(const Instance& g, const OfflineSpec& spec, const EnumerationOptions& options) {
  if (!options.monte_carlo) {
    CompensatedSum value;
    for_each_selection(g, spec, options.cap,
                       [&](const Realization& r, const PathSelection& sel) { value += r.mass * sel.value; });
    return Estimate{value.value(), 0.0, true, 0, 0};
  }
  if (options.trials == 0) throw InvalidArgument("Monte Carlo mode needs trials >= 1");
  const OptSolver solver(g, options.cap);
  const RealizationSampler sampler(g);
  std::vector<double> values;
  values.reserve(options.trials);
  for (std::uint64_t j = 0; j < options.trials; ++j) {
    Rng rng(derive_seed(options.seed, j));
    values.push_back(solver.solve(sampler.sample(rng), spec).value);
  }
  const double n = static_cast<double>(options.trials);
  const double mean = pairwise_sum(values) / n;
  CompensatedSum sq;
  for (double v : values) sq += (v - mean) * (v - mean);
  const double se = options.trials > 1 ? std::sqrt(sq.value() / (n - 1.0) / n) : 0.0;
  return Estimate{mean, se, false, options.trials, options.seed};
}

EdgeProbabilities edge_probabilities(const Instance& g, const OfflineSpec& spec,
                                     const EnumerationOptions& options) {
  if (options.monte_carlo) {
    auto p = selection_profile(g, spec, options);
    return EdgeProbabilities{spec, std::move(p.edge_prob)};
  }
  std::vector<CompensatedSum> x(g.edge_count());
  for_each_selection(g, spec, options.cap, [&](const Realization& r, const PathSelection& sel) {
    for (EdgeId e : sel.edges) x[e] += r.mass;
  });
  EdgeProbabilities out{spec, {}};
  for (const auto& s : x) out.x.push_back(s.value());
  return out;
}

std::vector<double> conditional_choice_distribution(const Instance& g, const OfflineSpec& spec,
                                                    NodeIndex u, std::size_t outcome,
                                                    const EnumerationOptions& options) {
  if (u >= g.node_count() || outcome >= g.outcomes(u).size()) {
    throw InvalidArgument("conditional_choice_distribution: no such node/outcome");
  }
  const std::size_t deg = g.out_edges(u).size();
  if (options.monte_carlo) {
    return selection_profile(g, spec, options).choice[u][outcome];
  }
  // enumerate every other node with u pinned to the observed outcome
  const std::uint64_t others = realization_count(g) / g.outcomes(u).size();
  if (others > options.cap) {
    throw EnumerationTooLarge("enumeration too large for conditional law, use Monte Carlo");
  }
  const OptSolver solver(g, options.cap);
  std::vector<CompensatedSum> acc(deg + 1);
  CompensatedSum total;
  const double pinned = g.outcomes(u)[outcome].mass;
  for_each_realization(g, options.cap, [&](const Realization& r) {
    if (r.outcome[u] != outcome) return;
    const double w = r.mass / pinned;
    std::size_t slot = deg;
    for (EdgeId e : solver.solve(r, spec).edges) {
      if (g.edge(e).src == u) slot = g.slot(e);
    }
    acc[slot] += w;
    total += w;
  });
  std::vector<double> law;
  for (const auto& s : acc) law.push_back(s.value() / total.value());
  return law;
}

double selection_probability(const Instance& g, const OfflineSpec& spec,
                             const std::vector<EdgeId>& path, std::uint64_t cap) {
  CompensatedSum q;
  for_each_selection(g, spec, cap, [&](const Realization& r, const PathSelection& sel) {
    if (sel.edges == path) q += r.mass;
  });
  return q.value();
}

double optimal_online_value(const Instance& g, std::uint64_t state_cap) {
  const CapacitySpace caps(g, state_cap);
  const std::size_t states = caps.size();
  std::vector<double> w(g.node_count() * states, kNegInf);
  const NodeIndex t = g.sink();
  for (std::size_t c = 0; c < states; ++c) w[t * states + c] = 0.0;
  for (NodeIndex u = t; u-- > 0;) {
    for (std::size_t c = 0; c < states; ++c) {
      CompensatedSum expectation;
      bool stuck = false;
      for (std::size_t o = 0; o < g.outcomes(u).size(); ++o) {
        double best = kNegInf;
        for (EdgeId e : g.out_edges(u)) {
          if (!caps.feasible(c, e)) continue;
          const double tail = w[g.edge(e).dst * states + caps.take(c, e)];
          if (tail == kNegInf) continue;
          best = std::max(best, g.value(e, o) + tail);
        }
        if (best == kNegInf) {
          stuck = true;
          break;
        }
        expectation += g.outcomes(u)[o].mass * best;
      }
      w[u * states + c] = stuck ? kNegInf : expectation.value();
    }
  }
  const double v = w[g.source() * states + caps.full()];
  if (v == kNegInf) throw InternalError("no feasible online route from s");
  return v;
}

}  // namespace prophet
