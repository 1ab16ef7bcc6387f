#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prophet/errors.hpp"
#include "prophet/instances.hpp"
#include "prophet/simulator.hpp"
#include "support/oracles.hpp"

using namespace prophet;

namespace {

PreparedPolicy prepare(const Instance& g, PolicyKind kind) {
  PolicyOptions o;
  o.kind = kind;
  return PreparedPolicy::prepare(g, o);
}

}  // namespace

TEST_CASE("policy names round-trip") {
  for (PolicyKind k : {PolicyKind::Width1, PolicyKind::Width1Labeled, PolicyKind::General, PolicyKind::Disjoint})
    CHECK(parse_policy_kind(policy_name(k)) == k);
  CHECK_FALSE(parse_policy_kind("greedy").has_value());
}

TEST_CASE("exact report on the two-candidate instance") {
  const Instance g = classic_hard_pair(0.5);
  const PreparedPolicy p = prepare(g, PolicyKind::Width1);
  const PolicyRunReport rep = competitive_report(g, p, ReportMode{});
  CHECK(rep.exact);
  CHECK(rep.alg == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rep.opt == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(rep.bound == doctest::Approx(0.5));
  CHECK(rep.pass);
  REQUIRE(rep.online_opt.has_value());
  CHECK(*rep.online_opt == doctest::Approx(1.0));
  const nlohmann::json j = report_to_json(rep);
  CHECK(j.at("alg").get<double>() == doctest::Approx(0.75));
  CHECK(report_to_table(rep).find("0.75") != std::string::npos);
}

TEST_CASE("deterministic instance: one trial gives the path value with zero error") {
  GeneratorParams p;
  p.family = "classic";
  p.n = 3;
  p.laws = {constant_law(2.0)};
  const Instance det = generate_family_instance(p).instance;
  const PreparedPolicy pol = prepare(det, PolicyKind::Width1);
  const PolicyRunReport rep = monte_carlo_estimate(det, pol, 1, 42);
  CHECK(rep.trials == 1);
  CHECK(rep.alg_std_error == 0.0);
  CHECK(rep.alg == doctest::Approx(pol.exact_value().value));
}

TEST_CASE("Monte Carlo estimate of the two-candidate instance is within 3 SE of 0.75") {
  const Instance g = classic_hard_pair(0.5);
  const PreparedPolicy p = prepare(g, PolicyKind::Width1);
  int misses = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ReportMode mode;
    mode.monte_carlo = true;
    mode.trials = 100000;
    mode.seed = seed;
    mode.include_online_opt = false;
    const PolicyRunReport rep = competitive_report(g, p, mode);
    if (std::abs(rep.alg - 0.75) > 3.0 * rep.alg_std_error) ++misses;
    CHECK(std::abs(rep.opt - 1.5) <= 4.0 * rep.opt_std_error);
    CHECK(rep.pass);
  }
  CHECK(misses <= 1);
}

TEST_CASE("Monte Carlo reports are bit-identical across runs and thread counts") {
  GeneratorParams gp;
  gp.family = "grid";
  gp.k = 3;
  gp.eps = 0.1;
  const Instance g = generate_family_instance(gp).instance;
  const PreparedPolicy p = prepare(g, PolicyKind::General);
  const auto a = report_to_json(monte_carlo_estimate(g, p, 5000, 9, 1), false).dump();
  const auto b = report_to_json(monte_carlo_estimate(g, p, 5000, 9, 1), false).dump();
  const auto c = report_to_json(monte_carlo_estimate(g, p, 5000, 9, 4), false).dump();
  CHECK(a == b);
  CHECK(a == c);
  const auto d = report_to_json(monte_carlo_estimate(g, p, 5000, 10, 1), false).dump();
  CHECK(a != d);
}

TEST_CASE("exact values agree with Monte Carlo for every policy kind") {
  RandomParams rp;
  rp.family = "layered";
  rp.nodes = 6;
  rp.labels = 2;
  rp.max_labels_per_edge = 2;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Instance g = generate_random_instance(rp, seed);
    const PreparedPolicy p = prepare(g, PolicyKind::General);
    const auto exact = p.exact_value();
    const PolicyRunReport mc = monte_carlo_estimate(g, p, 20000, seed + 100);
    CHECK(std::abs(mc.alg - exact.value) <= 4.0 * mc.alg_std_error + 1e-12);
    CHECK(exact.without_connectors <= exact.value + 1e-12);
    CHECK(exact.value >= expected_opt(g).mean / (p.k() * (p.d() + 2.0)) - 1e-9);
  }
}

TEST_CASE("ratio never exceeds one in exact mode") {
  RandomParams rp;
  rp.family = "layered";
  rp.nodes = 5;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance g = generate_random_instance(rp, seed);
    const PolicyRunReport rep = competitive_report(g, prepare(g, PolicyKind::General), ReportMode{});
    CHECK(rep.ratio <= 1.0 + 1e-9);
    CHECK(rep.pass);
    REQUIRE(rep.online_opt.has_value());
    CHECK(*rep.online_opt >= rep.alg - 1e-9);
    CHECK(*rep.online_opt <= rep.opt + 1e-9);
  }
}

TEST_CASE("policy preconditions") {
  const Instance g = classic_hard_pair(0.5);
  PolicyOptions o;
  o.kind = PolicyKind::Width1;
  CHECK_NOTHROW(PreparedPolicy::prepare(g, o));
  GeneratorParams gp;
  gp.family = "kplus1";
  gp.k = 2;
  const Instance wide = generate_family_instance(gp).instance;
  CHECK_THROWS_AS(PreparedPolicy::prepare(wide, o), InvalidArgument);
  gp.family = "mchoice";
  gp.n = 4;
  const Instance labeled = generate_family_instance(gp).instance;
  CHECK_THROWS_AS(PreparedPolicy::prepare(labeled, o), InvalidArgument);
  o.kind = PolicyKind::Width1Labeled;
  o.d = 0;
  CHECK_THROWS_AS(PreparedPolicy::prepare(labeled, o), InvalidArgument);
  o.d = 3;
  const PreparedPolicy p = PreparedPolicy::prepare(labeled, o);
  CHECK(p.guaranteed_ratio() == doctest::Approx(1.0 / 5.0));
  o.kind = PolicyKind::Disjoint;
  o.d.reset();
  CHECK_THROWS_AS(PreparedPolicy::prepare(labeled, o), InvalidArgument);
}

TEST_CASE("general policy on a width-1 instance coincides with the width-1 policy") {
  const Instance g = classic_hard_pair(0.2);
  CHECK(prepare(g, PolicyKind::General).exact_value().value ==
        doctest::Approx(prepare(g, PolicyKind::Width1Labeled).exact_value().value).epsilon(1e-12));
  CHECK(prepare(g, PolicyKind::General).guaranteed_ratio() == doctest::Approx(0.5));
}
