#include "prophet/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "prophet/errors.hpp"
#include "prophet/instance_io.hpp"
#include "prophet/instances.hpp"
#include "prophet/oracle.hpp"
#include "prophet/path_cover.hpp"
#include "prophet/simulator.hpp"

namespace prophet {

namespace {

using ojson = nlohmann::ordered_json;

struct Options {
  std::string input;
  bool json = false;
  bool exact = false;
  bool mc = false;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cover_seed;
  std::string cover_file;
  std::string output;
  std::optional<std::uint64_t> cap;
  std::string policy;
  std::optional<std::size_t> d;
  std::uint64_t feasibility_trials = 0;
  bool no_online = false;
  std::uint64_t trial = 0;
  // gen
  std::string family;
  GeneratorParams gen;
  std::vector<std::string> laws;
  RandomParams random;
};

constexpr const char* kReportFields = R"(Report fields:
  policy                 policy name
  parameters             k (cover size), d (max labels per edge), cover (edge-id paths),
                         bound (guarantee formula); disjoint adds best_part, f, q,
                         expected_opt_restricted and certified per strand
  mode                   exact or monte-carlo
  alg, alg_std_error     policy value (standard error is 0 in exact mode)
  alg_without_connectors general policy: value without the unlabeled connector edges
  trials, seed           Monte Carlo only; parameters.seed_generated is true when no --seed was given
  opt, opt_std_error     expected offline optimum, on the same realizations in MC mode
  online_opt             best online policy value (omitted when the state space is too large)
  ratio                  alg / opt
  bound, bound_label     guaranteed competitive constant
  pass                   alg >= bound * opt (exact: within 1e-9; MC: within 4 standard errors)
  wall_seconds           elapsed time)";

std::uint64_t resolve_cap(const Options& o) {
  if (o.cap) return *o.cap;
  if (const char* env = std::getenv("PROPHET_ENUM_CAP"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size() && v > 0) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("PROPHET_ENUM_CAP must be a positive integer, got '") + env + "'");
  }
  return kDefaultEnumerationCap;
}

std::uint64_t resolve_seed(const Options& o, bool& generated) {
  generated = !o.seed.has_value();
  if (o.seed) return *o.seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void require_mc_args(const Options& o) {
  if (o.mc && o.exact) throw InvalidArgument("--exact and --mc are mutually exclusive");
  if (o.mc && o.trials == 0) throw InvalidArgument("--mc needs --trials N with N >= 1");
}

Instance load_valid(const Options& o, std::uint64_t cap) {
  InstanceDocument doc = load_instance(o.input);
  const ValidationReport report = validate_instance(doc.instance, cap);
  if (!report.ok()) {
    std::string msg = "instance failed validation:";
    for (const auto& v : report.violations) msg += " [" + v.kind + "] " + v.message + ";";
    throw InvalidInstance(msg);
  }
  return std::move(doc.instance);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

DiscreteLaw parse_law(const std::string& text) {
  DiscreteLaw law;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidArgument("law entries look like p:value, got '" + item + "'");
    const double p = parse_probability(item.substr(0, colon)).value;
    double v = 0.0;
    try {
      v = std::stod(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidArgument("bad value in law entry '" + item + "'");
    }
    law.push_back({p, v});
  }
  return law;
}

// ---------------------------------------------------------------------------

void cmd_validate(const Options& o, CommandResult& res) {
  InstanceDocument doc = load_instance(o.input);
  const ValidationReport report = validate_instance(doc.instance, resolve_cap(o));
  std::ostringstream out;
  if (o.json) {
    ojson j;
    j["ok"] = report.ok();
    j["violations"] = ojson::array();
    for (const auto& v : report.violations) j["violations"].push_back({{"kind", v.kind}, {"message", v.message}});
    j["warnings"] = report.warnings;
    out << j.dump(2) << '\n';
  } else {
    out << (report.ok() ? "valid" : "invalid") << '\n';
    for (const auto& v : report.violations) out << "  " << v.kind << ": " << v.message << '\n';
    for (const auto& w : report.warnings) out << "  warning: " << w << '\n';
  }
  res.out = out.str();
  if (!report.ok()) {
    res.exit_code = category_exit_code(ErrorCategory::Validation);
    res.err = ojson{{"error", category_name(ErrorCategory::Validation)},
                    {"message", std::to_string(report.violations.size()) + " violation(s)"}}
                  .dump() +
              "\n";
  }
}

void cmd_width(const Options& o, CommandResult& res) {
  const Instance g = load_valid(o, resolve_cap(o));
  const std::size_t w = graph_width(g);
  res.out = o.json ? ojson{{"width", w}}.dump() + "\n" : std::to_string(w) + "\n";
}

void cmd_cover(const Options& o, CommandResult& res) {
  const Instance g = load_valid(o, resolve_cap(o));
  const PathCover cover = min_path_cover(g, o.cover_seed);
  const ojson j = cover_to_json(cover);
  if (!o.output.empty()) write_text_file(o.output, j.dump() + "\n");
  if (o.json) {
    res.out = j.dump() + "\n";
    return;
  }
  std::ostringstream out;
  out << "cover size " << cover.size() << '\n';
  for (std::size_t i = 0; i < cover.size(); ++i) {
    out << "path " << i << ": edges";
    for (EdgeId e : cover.paths[i]) out << ' ' << e;
    out << "  nodes";
    for (NodeIndex u : cover.node_orders[i]) out << ' ' << g.node_name(u);
    out << '\n';
  }
  res.out = out.str();
}

EnumerationOptions enumeration(const Options& o, std::uint64_t cap, ojson& info) {
  require_mc_args(o);
  EnumerationOptions e;
  e.cap = cap;
  if (o.mc) {
    bool generated = false;
    e.monte_carlo = true;
    e.trials = o.trials;
    e.seed = resolve_seed(o, generated);
    info["mode"] = "monte-carlo";
    info["trials"] = e.trials;
    info["seed"] = e.seed;
    info["seed_generated"] = generated;
  } else {
    info["mode"] = "exact";
  }
  return e;
}

void cmd_opt(const Options& o, CommandResult& res) {
  const std::uint64_t cap = resolve_cap(o);
  const Instance g = load_valid(o, cap);
  ojson j;
  const EnumerationOptions e = enumeration(o, cap, j);
  const Estimate est = expected_opt(g, OfflineSpec::opt(), e);
  j["expected_opt"] = est.mean;
  j["std_error"] = est.std_error;
  if (o.json) {
    res.out = j.dump(2) + "\n";
  } else {
    res.out = "E[OPT] = " + fmt(est.mean) + (est.exact ? "" : " +/- " + fmt(est.std_error)) + "\n";
  }
}

void cmd_xprobs(const Options& o, CommandResult& res) {
  const std::uint64_t cap = resolve_cap(o);
  const Instance g = load_valid(o, cap);
  ojson j;
  const EnumerationOptions e = enumeration(o, cap, j);
  const EdgeProbabilities x = edge_probabilities(g, OfflineSpec::opt(), e);
  if (o.json) {
    j["x"] = x.x;
    res.out = j.dump(2) + "\n";
    return;
  }
  std::ostringstream out;
  out << std::left << std::setw(6) << "edge" << std::setw(12) << "src" << std::setw(12) << "dst" << "x\n";
  for (const auto& e2 : g.edges())
    out << std::setw(6) << e2.id << std::setw(12) << g.node_name(e2.src) << std::setw(12) << g.node_name(e2.dst)
        << fmt(x.x[e2.id]) << '\n';
  res.out = out.str();
}

void cmd_online_opt(const Options& o, CommandResult& res) {
  const std::uint64_t cap = resolve_cap(o);
  const Instance g = load_valid(o, cap);
  const double v = optimal_online_value(g, cap);
  res.out = o.json ? ojson{{"optimal_online_value", v}}.dump() + "\n" : fmt(v) + "\n";
}

PolicyOptions policy_options(const Instance& g, const Options& o, std::uint64_t cap, std::uint64_t seed) {
  PolicyOptions p;
  const auto kind = parse_policy_kind(o.policy);
  if (!kind) throw InvalidArgument("unknown policy '" + o.policy + "' (width1, width1-labeled, general, disjoint)");
  p.kind = *kind;
  p.cap = cap;
  p.cover_seed = o.cover_seed;
  if (!o.cover_file.empty()) p.cover = load_cover(g, o.cover_file);
  p.d = o.d;
  p.feasibility.state_cap = cap;
  if (o.feasibility_trials > 0) {
    p.feasibility.monte_carlo = true;
    p.feasibility.trials = o.feasibility_trials;
    p.feasibility.seed = derive_seed(seed, 0xfea5);
  }
  p.law.cap = cap;
  if (o.mc && realization_count(g) > cap) {
    p.law = EnumerationOptions{cap, true, o.trials, derive_seed(seed, 0x1a3)};
  }
  return p;
}

void cmd_simulate(const Options& o, CommandResult& res) {
  require_mc_args(o);
  const std::uint64_t cap = resolve_cap(o);
  const Instance g = load_valid(o, cap);
  bool generated = false;
  const std::uint64_t seed = o.mc || o.feasibility_trials > 0 ? resolve_seed(o, generated) : o.seed.value_or(0);
  const PreparedPolicy policy = PreparedPolicy::prepare(g, policy_options(g, o, cap, seed));
  ReportMode mode;
  mode.monte_carlo = o.mc;
  mode.trials = o.trials;
  mode.seed = seed;
  mode.cap = cap;
  mode.include_online_opt = !o.no_online;
  PolicyRunReport report = competitive_report(g, policy, mode);
  if (o.mc || o.feasibility_trials > 0) report.parameters["seed_generated"] = generated;
  if (o.feasibility_trials > 0) report.parameters["seed"] = seed;
  if (o.json) {
    res.out = report_to_json(report).dump(2) + "\n";
  } else {
    res.out = report_to_table(report);
  }
  if (!o.output.empty()) write_text_file(o.output, report_to_json(report).dump(2) + "\n");
}

void cmd_trace(const Options& o, CommandResult& res) {
  const std::uint64_t cap = resolve_cap(o);
  const Instance g = load_valid(o, cap);
  bool generated = false;
  const std::uint64_t seed = resolve_seed(o, generated);
  const PreparedPolicy policy = PreparedPolicy::prepare(g, policy_options(g, o, cap, seed));
  // Same generator as trial `trial` of a Monte Carlo run with this seed.
  Rng rng(derive_seed(seed, o.trial));
  const Realization r = RealizationSampler(g).sample(rng);
  const Trajectory traj = policy.run(r, rng);

  ojson j;
  j["policy"] = policy_name(policy.kind());
  j["seed"] = seed;
  j["seed_generated"] = generated;
  j["trial"] = o.trial;
  j["outcomes"] = r.outcome;
  j["decisions"] = ojson::array();
  for (const auto& d : traj.decisions) {
    ojson dj;
    dj["node"] = g.node_name(d.node);
    dj["outcome"] = d.outcome;
    dj["tentative"] = d.tentative ? ojson(*d.tentative) : ojson(nullptr);
    dj["feasible"] = d.feasible;
    dj["coin_probability"] = d.coin_probability ? ojson(*d.coin_probability) : ojson(nullptr);
    dj["coin"] = d.coin ? ojson(*d.coin) : ojson(nullptr);
    dj["action"] = d.action;
    dj["value"] = d.value;
    j["decisions"].push_back(dj);
  }
  j["path"] = traj.edges;
  j["value"] = traj.value;
  if (o.json) {
    res.out = j.dump(2) + "\n";
    return;
  }
  std::ostringstream out;
  out << "policy " << policy_name(policy.kind()) << ", seed " << seed << ", trial " << o.trial << '\n';
  out << std::left << std::setw(12) << "node" << std::setw(9) << "outcome" << std::setw(11) << "tentative"
      << std::setw(10) << "feasible" << std::setw(12) << "coin p" << std::setw(7) << "coin" << std::setw(8) << "action"
      << "value\n";
  for (const auto& d : traj.decisions) {
    out << std::setw(12) << g.node_name(d.node) << std::setw(9) << d.outcome << std::setw(11)
        << (d.tentative ? std::to_string(*d.tentative) : "none") << std::setw(10) << (d.feasible ? "yes" : "no")
        << std::setw(12) << (d.coin_probability ? fmt(*d.coin_probability) : "-") << std::setw(7)
        << (d.coin ? (*d.coin ? "heads" : "tails") : "-") << std::setw(8) << d.action << fmt(d.value) << '\n';
  }
  out << "path";
  for (EdgeId e : traj.edges) out << ' ' << e;
  out << "\nvalue " << fmt(traj.value) << '\n';
  res.out = out.str();
}

void cmd_gen(Options o, CommandResult& res) {
  ojson meta;
  Instance g;
  if (o.family == "random") {
    bool generated = false;
    const std::uint64_t seed = resolve_seed(o, generated);
    g = generate_random_instance(o.random, seed);
    meta["family"] = "random";
    meta["random_family"] = o.random.family;
    meta["seed"] = seed;
    meta["seed_generated"] = generated;
  } else {
    o.gen.family = o.family;
    for (const auto& text : o.laws) o.gen.laws.push_back(parse_law(text));
    GeneratedInstance out = generate_family_instance(o.gen);
    g = std::move(out.instance);
    meta = ojson::parse(out.metadata.dump());
  }
  require_valid(g);
  const std::string text = instance_to_json(g, meta).dump(2) + "\n";
  if (o.output.empty()) {
    res.out = text;
  } else {
    write_text_file(o.output, text);
    res.out = "wrote " + o.output + " (" + std::to_string(g.node_count()) + " nodes, " +
              std::to_string(g.edge_count()) + " edges)\n";
  }
}

}  // namespace

CommandResult execute_command(const std::vector<std::string>& args) {
  CommandResult res;
  Options o;
  CLI::App app{"Prophet inequalities on stochastic DAGs: offline optimum, online policies and simulation.", "prophet"};
  app.require_subcommand(1);

  auto add_input = [&](CLI::App* sub) { sub->add_option("instance", o.input, "Instance JSON file")->required(); };
  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "Structured output");
    sub->add_option("--cap", o.cap, "Enumeration cap (default: $PROPHET_ENUM_CAP or 10000000)");
  };
  auto add_mc = [&](CLI::App* sub) {
    sub->add_flag("--exact", o.exact, "Exact enumeration (default)");
    sub->add_flag("--mc", o.mc, "Monte Carlo estimation");
    sub->add_option("--trials", o.trials, "Monte Carlo trials");
    sub->add_option("--seed", o.seed, "Master seed (generated and reported when omitted)");
  };
  auto add_policy = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--policy", o.policy, "width1 | width1-labeled | general | disjoint");
    if (required) opt->required();
    sub->add_option("--cover", o.cover_file, "Cover file: JSON array of edge-id paths");
    sub->add_option("--cover-seed", o.cover_seed, "Shuffle seed for the minimum path cover");
    sub->add_option("--d", o.d, "Label bound d used by labeled policies (at least the instance's)");
    sub->add_option("--feasibility-trials", o.feasibility_trials,
                    "Estimate p(e) by Monte Carlo with this many runs (default exact)");
  };

  auto* validate = app.add_subcommand("validate", "Check model assumptions");
  add_input(validate);
  add_common(validate);
  auto* width = app.add_subcommand("width", "Print the size of a minimum s,t-path cover");
  add_input(width);
  add_common(width);
  auto* cover = app.add_subcommand("cover", "Print a minimum s,t-path cover as edge-id paths");
  add_input(cover);
  add_common(cover);
  cover->add_option("--cover-seed", o.cover_seed, "Shuffle seed for tie-breaking");
  cover->add_option("-o,--output", o.output, "Also write the cover JSON here");
  auto* opt = app.add_subcommand("opt", "Expected offline optimum E[OPT]");
  add_input(opt);
  add_common(opt);
  add_mc(opt);
  auto* xprobs = app.add_subcommand("xprobs", "Probability that the offline optimum uses each edge");
  add_input(xprobs);
  add_common(xprobs);
  add_mc(xprobs);
  auto* online = app.add_subcommand("online-opt", "Value of the best online policy (backward induction)");
  add_input(online);
  add_common(online);
  auto* simulate = app.add_subcommand("simulate", "Evaluate a policy and compare with E[OPT]");
  add_input(simulate);
  add_common(simulate);
  add_mc(simulate);
  add_policy(simulate, true);
  simulate->add_flag("--no-online-opt", o.no_online, "Skip the online optimum");
  simulate->add_option("-o,--output", o.output, "Also write the JSON report here");
  simulate->footer(kReportFields);
  auto* trace = app.add_subcommand("trace", "One seeded run, printed node by node");
  add_input(trace);
  add_common(trace);
  add_policy(trace, true);
  trace->add_option("--seed", o.seed, "Master seed (generated and reported when omitted)");
  trace->add_option("--trial", o.trial, "Replay this trial index of a Monte Carlo run");
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("family", o.family,
                  "classic | overtime | markets | upper49 | grid | kplus1 | mchoice | vertex-matching | random")
      ->required();
  gen->add_option("-o,--output", o.output, "Output file (default stdout)");
  gen->add_option("--n", o.gen.n, "Candidates, horizon or bidders");
  gen->add_option("--k", o.gen.k, "Strands or grid size");
  gen->add_option("--eps", o.gen.eps, "Risky value 1/eps with probability eps");
  gen->add_option("--m", o.gen.m, "Capacity (mchoice), markets (markets) or items (vertex-matching)");
  gen->add_option("--terms", o.gen.terms, "Allowed lease terms")->delimiter(',');
  gen->add_flag("--parallel-last", o.gen.parallel_last, "classic: last candidate on a bypass edge");
  gen->add_option("--law", o.laws, "Per-step law p:value,p:value (repeat for several steps)");
  gen->add_option("--seed", o.seed, "random: seed");
  gen->add_option("--random-family", o.random.family, "random: layered | width1 | disjoint");
  gen->add_option("--nodes", o.random.nodes, "random: node count");
  gen->add_option("--strands", o.random.strands, "random disjoint: strand count");
  gen->add_option("--labels", o.random.labels, "random: number of labels");
  gen->add_option("--max-labels", o.random.max_labels_per_edge, "random: labels per labeled edge");
  gen->add_option("--outcomes", o.random.max_outcomes, "random: max outcomes per node");

  std::ostringstream out;
  std::ostringstream err;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    res.exit_code = app.exit(e, out, err);
    res.out = out.str();
    return res;
  } catch (const CLI::CallForAllHelp& e) {
    res.exit_code = app.exit(e, out, err);
    res.out = out.str();
    return res;
  } catch (const CLI::ParseError& e) {
    res.exit_code = category_exit_code(ErrorCategory::InvalidArgument);
    res.err = ojson{{"error", category_name(ErrorCategory::InvalidArgument)}, {"message", e.what()}}.dump() + "\n";
    return res;
  }

  try {
    if (validate->parsed()) cmd_validate(o, res);
    else if (width->parsed()) cmd_width(o, res);
    else if (cover->parsed()) cmd_cover(o, res);
    else if (opt->parsed()) cmd_opt(o, res);
    else if (xprobs->parsed()) cmd_xprobs(o, res);
    else if (online->parsed()) cmd_online_opt(o, res);
    else if (simulate->parsed()) cmd_simulate(o, res);
    else if (trace->parsed()) cmd_trace(o, res);
    else if (gen->parsed()) cmd_gen(o, res);
  } catch (const Error& e) {
    res.exit_code = category_exit_code(e.category());
    res.err = ojson{{"error", category_name(e.category())}, {"message", e.what()}}.dump() + "\n";
  } catch (const std::exception& e) {
    res.exit_code = category_exit_code(ErrorCategory::Internal);
    res.err = ojson{{"error", category_name(ErrorCategory::Internal)}, {"message", e.what()}}.dump() + "\n";
  }
  return res;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const CommandResult res = execute_command(args);
  std::cout << res.out;
  std::cerr << res.err;
  return res.exit_code;
}

}  // namespace prophet
