#include "prophet/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "prophet/errors.hpp"

namespace prophet {

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  if (name == "width1") return PolicyKind::Width1;
  if (name == "width1-labeled") return PolicyKind::Width1Labeled;
  if (name == "general") return PolicyKind::General;
  if (name == "disjoint") return PolicyKind::Disjoint;
  return std::nullopt;
}

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Width1: return "width1";
    case PolicyKind::Width1Labeled: return "width1-labeled";
    case PolicyKind::General: return "general";
    case PolicyKind::Disjoint: return "disjoint";
  }
  return "?";
}

namespace {

const FocalPath& single_focal(const PathCover& cover, const Instance& g, FocalPath& out) {
  if (cover.size() != 1)
    throw InvalidArgument("width-1 policies need a single covering path, got " + std::to_string(cover.size()));
  out = make_focal_path(g, cover.paths.front(), true);
  return out;
}

}  // namespace

PreparedPolicy PreparedPolicy::prepare(const Instance& g, const PolicyOptions& options) {
  PreparedPolicy p;
  p.g_ = &g;
  p.kind_ = options.kind;
  p.cap_ = options.cap;
  p.cover_ = options.cover ? *options.cover : min_path_cover(g, options.cover_seed);
  if (!is_valid_cover(g, p.cover_)) throw InvalidArgument("cover does not cover every node with s,t-paths");
  if (options.d && *options.d < g.max_labels())
    throw InvalidArgument("d = " + std::to_string(*options.d) + " is below the instance's " +
                          std::to_string(g.max_labels()) + " labels per edge");
  p.d_ = std::max(g.max_labels(), options.d.value_or(0));

  EnumerationOptions law_opts = options.law;
  law_opts.cap = options.cap;

  switch (options.kind) {
    case PolicyKind::Width1: {
      if (g.has_labels()) throw InvalidArgument("policy width1 needs an unlabeled instance");
      Part part;
      single_focal(p.cover_, g, part.focal);
      part.law = selection_profile(g, OfflineSpec::opt(), law_opts);
      part.schedule = alpha_schedule(g, part.focal, EdgeProbabilities{part.law.spec, part.law.edge_prob}, 0.0);
      part.acceptance = part.schedule->acceptance(g);
      p.parts_.push_back(std::move(part));
      break;
    }
    case PolicyKind::Width1Labeled: {
      Part part;
      single_focal(p.cover_, g, part.focal);
      part.law = selection_profile(g, OfflineSpec::opt(), law_opts);
      part.probs = feasibility_probabilities(g, part.focal, part.law, p.d_, options.feasibility);
      part.acceptance = part.probs->acceptance;
      p.parts_.push_back(std::move(part));
      break;
    }
    case PolicyKind::General: {
      for (std::size_t i = 0; i < p.cover_.size(); ++i) {
        Part part;
        part.contracted = build_contracted_instance(g, p.cover_, i);
        const Instance& gi = part.contracted->graph;
        part.focal = make_focal_path(gi, part.contracted->focal, true);
        part.law = selection_profile(gi, OfflineSpec::opt(), law_opts);
        FeasibilityMode mode = options.feasibility;
        mode.seed = derive_seed(options.feasibility.seed, i);
        part.probs = feasibility_probabilities(gi, part.focal, part.law, gi.max_labels(), mode);
        part.acceptance = part.probs->acceptance;
        p.parts_.push_back(std::move(part));
      }
      break;
    }
    case PolicyKind::Disjoint: {
      p.plan_ = build_disjoint_plan(g, p.cover_, options.cap);
      const std::size_t best = p.plan_->best;
      Part part;
      part.focal = make_focal_path(g, p.cover_.paths[best], false);
      part.law = selection_profile(g, p.plan_->specs[best], law_opts);
      part.schedule = alpha_schedule(g, part.focal, EdgeProbabilities{part.law.spec, part.law.edge_prob},
                                     p.plan_->q[best]);
      part.acceptance = part.schedule->acceptance(g);
      p.parts_.push_back(std::move(part));
      break;
    }
  }
  return p;
}

double PreparedPolicy::guaranteed_ratio() const {
  const double paths = static_cast<double>(k());
  const double d = static_cast<double>(d_);
  switch (kind_) {
    case PolicyKind::Width1: return 0.5;
    case PolicyKind::Width1Labeled: return 1.0 / (d + 2.0);
    case PolicyKind::General: return 1.0 / (paths * (d + 2.0));
    case PolicyKind::Disjoint: return 1.0 / (paths + 1.0);
  }
  return 0.0;
}

std::string PreparedPolicy::bound_label() const {
  switch (kind_) {
    case PolicyKind::Width1: return "1/2";
    case PolicyKind::Width1Labeled: return "1/(d+2), d=" + std::to_string(d_);
    case PolicyKind::General: return "1/(k(d+2)), k=" + std::to_string(k()) + ", d=" + std::to_string(d_);
    case PolicyKind::Disjoint: return "1/(k+1), k=" + std::to_string(k());
  }
  return "";
}

PreparedPolicy::ExactValue PreparedPolicy::exact_value() const {
  ExactValue out;
  CompensatedSum total;
  CompensatedSum inner;
  for (const Part& part : parts_) {
    if (!part.contracted) {
      const Width1Evaluation ev = evaluate_width1(*g_, part.focal, part.law,
                                                  [&](EdgeId e, double) { return part.acceptance[e]; }, cap_);
      out.per_part.push_back(ev.value);
      total += ev.value;
      inner += ev.value;
      continue;
    }
    const ContractedInstance& ci = *part.contracted;
    const Width1Evaluation ev = evaluate_width1(ci.graph, part.focal, part.law,
                                                [&](EdgeId e, double) { return part.acceptance[e]; }, cap_);
    // Connector nodes lie off P_i, so their values are independent of the run.
    CompensatedSum connectors;
    for (const ArtificialEdge& a : ci.artificial) {
      CompensatedSum path_mean;
      for (EdgeId c : a.connector) path_mean += g_->mean_value(c);
      connectors += ev.take_prob[a.contracted] * path_mean.value();
    }
    const double with = ev.value + connectors.value();
    out.per_part.push_back(with);
    total += with;
    inner += ev.value;
  }
  const double n = static_cast<double>(parts_.size());
  out.value = total.value() / n;
  out.without_connectors = inner.value() / n;
  return out;
}

Trajectory PreparedPolicy::run(const Realization& r, Rng& rng) const {
  std::size_t index = 0;
  if (parts_.size() > 1) {
    index = std::min(parts_.size() - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(parts_.size())));
  }
  const Part& part = parts_[index];
  if (!part.contracted) {
    if (part.probs) return run_width1_labeled(*g_, part.focal, part.law, *part.probs, r, rng);
    return run_width1(*g_, part.focal, part.law, part.acceptance, r, rng);
  }
  const ContractedInstance& ci = *part.contracted;
  const Trajectory inner = run_width1_labeled(ci.graph, part.focal, part.law, *part.probs, ci.restrict(r), rng);
  Trajectory out;
  out.edges = ci.expand(inner.edges);
  CompensatedSum value;
  for (EdgeId e : out.edges) value += r.value(*g_, e);
  out.value = value.value();
  out.decisions = inner.decisions;
  for (Decision& d : out.decisions) {
    d.node = ci.to_original_node[d.node];
    if (d.tentative) d.tentative = ci.to_original_edge[*d.tentative];
    d.action = ci.to_original_edge[d.action];
  }
  return out;
}

double exact_policy_value(const Instance&, const PreparedPolicy& policy) { return policy.exact_value().value; }

namespace {

nlohmann::json policy_parameters(const PreparedPolicy& policy) {
  nlohmann::json j;
  j["policy"] = policy_name(policy.kind());
  j["k"] = policy.k();
  j["d"] = policy.d();
  j["cover"] = policy.cover().paths;
  j["bound"] = policy.bound_label();
  if (const auto& plan = policy.disjoint_plan()) {
    j["best_part"] = plan->best;
    j["f"] = plan->f;
    j["q"] = plan->q;
    j["expected_opt_restricted"] = plan->expected_opt_restricted;
    j["certified"] = plan->certified;
  }
  for (const auto& part : policy.parts()) {
    if (part.probs) {
      j["feasibility"] = part.probs->exact ? "exact" : "monte-carlo";
      if (!part.probs->exact) {
        j["feasibility_trials"] = part.probs->trials;
      }
      break;
    }
  }
  return j;
}

}  // namespace

PolicyRunReport monte_carlo_estimate(const Instance& g, const PreparedPolicy& policy, std::uint64_t trials,
                                     std::uint64_t master_seed, unsigned threads) {
  if (trials == 0) throw InvalidArgument("Monte Carlo needs trials >= 1");
  const auto start = std::chrono::steady_clock::now();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, trials / 1000)));

  const RealizationSampler sampler(g);
  std::vector<double> values(trials);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      for (std::uint64_t j = t; j < trials; j += threads) {
        Rng rng(derive_seed(master_seed, j));
        const Realization r = sampler.sample(rng);
        values[j] = policy.run(r, rng).value;
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  PolicyRunReport report;
  report.policy = policy_name(policy.kind());
  report.parameters = policy_parameters(policy);
  report.exact = false;
  report.trials = trials;
  report.seed = master_seed;
  const double n = static_cast<double>(trials);
  report.alg = pairwise_sum(values) / n;
  if (trials > 1) {
    std::vector<double> sq(trials);
    for (std::uint64_t j = 0; j < trials; ++j) sq[j] = (values[j] - report.alg) * (values[j] - report.alg);
    report.alg_std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  report.bound = policy.guaranteed_ratio();
  report.bound_label = policy.bound_label();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

PolicyRunReport competitive_report(const Instance& g, const PreparedPolicy& policy, const ReportMode& mode) {
  const auto start = std::chrono::steady_clock::now();
  PolicyRunReport report;
  if (mode.monte_carlo) {
    report = monte_carlo_estimate(g, policy, mode.trials, mode.seed);
    // Same per-trial seeds, so OPT is measured on the same realizations.
    const Estimate opt = expected_opt(g, OfflineSpec::opt(), {mode.cap, true, mode.trials, mode.seed});
    report.opt = opt.mean;
    report.opt_std_error = opt.std_error;
  } else {
    const auto value = policy.exact_value();
    report.policy = policy_name(policy.kind());
    report.parameters = policy_parameters(policy);
    report.exact = true;
    report.alg = value.value;
    if (policy.kind() == PolicyKind::General) report.alg_without_connectors = value.without_connectors;
    report.opt = expected_opt(g, OfflineSpec::opt(), {mode.cap, false, 0, 0}).mean;
    report.bound = policy.guaranteed_ratio();
    report.bound_label = policy.bound_label();
  }
  if (mode.include_online_opt) {
    try {
      report.online_opt = optimal_online_value(g, mode.cap);
    } catch (const EnumerationTooLarge&) {
      report.online_opt.reset();
    }
  }
  report.ratio = report.opt > 0.0 ? report.alg / report.opt : 1.0;
  if (report.exact) {
    report.pass = report.alg >= report.bound * report.opt - kTolerance;
  } else {
    report.pass = report.alg + 4.0 * report.alg_std_error >=
                  report.bound * (report.opt - 4.0 * report.opt_std_error);
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

nlohmann::json report_to_json(const PolicyRunReport& report, bool include_timing) {
  nlohmann::json j;
  j["policy"] = report.policy;
  j["parameters"] = report.parameters;
  j["mode"] = report.exact ? "exact" : "monte-carlo";
  j["alg"] = report.alg;
  j["alg_std_error"] = report.alg_std_error;
  if (report.alg_without_connectors) j["alg_without_connectors"] = *report.alg_without_connectors;
  if (!report.exact) {
    j["trials"] = report.trials;
    j["seed"] = report.seed;
  }
  j["opt"] = report.opt;
  j["opt_std_error"] = report.opt_std_error;
  if (report.online_opt) j["online_opt"] = *report.online_opt;
  j["ratio"] = report.ratio;
  j["bound"] = report.bound;
  j["bound_label"] = report.bound_label;
  j["pass"] = report.pass;
  if (include_timing) j["wall_seconds"] = report.wall_seconds;
  return j;
}

std::string report_to_table(const PolicyRunReport& report) {
  std::ostringstream os;
  os << std::setprecision(6);
  auto row = [&](const std::string& key, const auto& value) { os << std::left << std::setw(14) << key << value << '\n'; };
  row("policy", report.policy);
  row("mode", report.exact ? std::string("exact") : "monte-carlo (" + std::to_string(report.trials) +
                                                        " trials, seed " + std::to_string(report.seed) + ")");
  if (report.exact) {
    row("E[ALG]", report.alg);
  } else {
    std::ostringstream v;
    v << std::setprecision(6) << report.alg << " +/- " << report.alg_std_error;
    row("E[ALG]", v.str());
  }
  if (report.alg_without_connectors) row("E[ALG] inner", *report.alg_without_connectors);
  if (report.exact) {
    row("E[OPT]", report.opt);
  } else {
    std::ostringstream v;
    v << std::setprecision(6) << report.opt << " +/- " << report.opt_std_error;
    row("E[OPT]", v.str());
  }
  if (report.online_opt) row("online opt", *report.online_opt);
  row("ratio", report.ratio);
  row("bound", report.bound_label + " = " + std::to_string(report.bound));
  row("check", report.pass ? "PASS" : "FAIL");
  return os.str();
}

}  // namespace prophet
