#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prophet/errors.hpp"
#include "prophet/instances.hpp"
#include "prophet/oracle.hpp"
#include "support/oracles.hpp"

using namespace prophet;

namespace {

RandomParams small_labeled(std::size_t nodes) {
  RandomParams p;
  p.family = "layered";
  p.nodes = nodes;
  p.max_outcomes = 2;
  p.labels = 2;
  p.max_labels_per_edge = 2;
  p.labeled_prob = 0.5;
  return p;
}

oracle::World world_of(const Realization& r) {
  oracle::World w;
  w.outcome.assign(r.outcome.begin(), r.outcome.end());
  w.mass = r.mass;
  return w;
}

}  // namespace

TEST_CASE("optimal path matches exhaustive search on graphs up to 10 nodes") {
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Instance g = generate_random_instance(small_labeled(4 + seed % 7), seed);
    REQUIRE(validate_instance(g).ok());
    const auto paths = oracle::all_st_paths(g);
    const OptSolver solver(g);
    const RealizationSampler sampler(g);
    Rng rng(seed);
    for (int i = 0; i < 20; ++i) {
      const Realization r = sampler.sample(rng);
      const PathSelection sel = solver.solve(r);
      const oracle::Best best = oracle::best_path(g, paths, world_of(r));
      CHECK(sel.value == doctest::Approx(best.value).epsilon(1e-12));
      CHECK(sel.edges == best.path);
      ++compared;
    }
  }
  CHECK(compared == 1200);
}

TEST_CASE("ties go to the lexicographically smallest edge sequence") {
  InstanceBuilder b;
  b.add_node("s");
  b.add_node("a");
  b.add_node("t");
  const auto e0 = b.add_edge(0, 2);
  const auto e1 = b.add_edge(0, 1);
  const auto e2 = b.add_edge(1, 2);
  b.add_outcome(0, 1.0, {{e0, 2.0}, {e1, 1.0}});
  b.add_outcome(1, 1.0, {{e2, 1.0}});
  const Instance g = b.build();
  Realization r{{0, 0, 0}, 1.0};
  CHECK(opt_path(g, r).edges == std::vector<EdgeId>{e0});
}

TEST_CASE("label capacities bind the optimal path") {
  GeneratorParams p;
  p.family = "upper49";
  p.eps = 0.1;
  const Instance g = generate_family_instance(p).instance;
  // b -> t red realized high: the red s -> a edge cannot be combined with it
  Realization r{{0, 1, 0, 0}, 1.0};
  const PathSelection sel = opt_path(g, r);
  int red = 0;
  for (EdgeId e : sel.edges) red += static_cast<int>(g.edge(e).labels.size());
  CHECK(red <= 1);
  CHECK(sel.value == doctest::Approx(20.0));
}

TEST_CASE("profile quantities match brute force on small instances") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    const Instance g = generate_random_instance(small_labeled(3 + seed % 4), seed);
    const oracle::Profile ref = oracle::profile(g);
    const SelectionProfile prof = selection_profile(g, OfflineSpec::opt());
    CHECK(prof.value.mean == doctest::Approx(ref.expected).epsilon(1e-12));
    CHECK(expected_opt(g).mean == doctest::Approx(ref.expected).epsilon(1e-12));
    const EdgeProbabilities x = edge_probabilities(g);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      CHECK(std::abs(prof.edge_prob[e] - ref.x[e]) < 1e-9);
      CHECK(std::abs(x.x[e] - ref.x[e]) < 1e-9);
    }
    for (NodeIndex u = 0; u + 1 < g.node_count(); ++u)
      for (std::size_t o = 0; o < g.outcomes(u).size(); ++o) {
        const auto law = conditional_choice_distribution(g, OfflineSpec::opt(), u, o);
        REQUIRE(law.size() == ref.law[u][o].size());
        for (std::size_t j = 0; j < law.size(); ++j) CHECK(std::abs(law[j] - ref.law[u][o][j]) < 1e-9);
      }
  }
}

TEST_CASE("restricted strategy keeps OPT inside the allowed set, else the fallback") {
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    const Instance g = generate_random_instance(small_labeled(5), seed);
    std::vector<bool> allowed(g.edge_count(), false);
    Rng rng(seed);
    for (EdgeId e = 0; e < g.edge_count(); ++e) allowed[e] = uniform01(rng) < 0.6;
    const auto fallback = *fewest_edge_path(g, 0, g.node_count() - 1, true);
    for (EdgeId e : fallback) allowed[e] = true;
    const OfflineSpec spec = OfflineSpec::restricted(allowed, fallback);
    const oracle::Profile ref = oracle::profile(g, &allowed, &fallback);
    const SelectionProfile prof = selection_profile(g, spec);
    CHECK(prof.value.mean == doctest::Approx(ref.expected).epsilon(1e-12));
    for (EdgeId e = 0; e < g.edge_count(); ++e) CHECK(std::abs(prof.edge_prob[e] - ref.x[e]) < 1e-9);
  }
  const Instance g = generate_random_instance(small_labeled(5), 200);
  std::vector<bool> none(g.edge_count(), false);
  CHECK_THROWS_AS(OfflineSpec::restricted(none, *fewest_edge_path(g, 0, g.node_count() - 1, true)), InvalidArgument);
}

TEST_CASE("conditional choice law on the two-candidate instance") {
  const Instance g = classic_hard_pair(0.5);
  // nodes v1, v2, t; edges: 0 v1->v2, 1 v2->t (backbone, 0), 2 v1->t (X1), 3 v2->t (X2)
  const NodeIndex v2 = 1;
  std::size_t zero = 0;
  std::size_t high = 0;
  for (std::size_t o = 0; o < g.outcomes(v2).size(); ++o) (g.value(3, o) == 0.0 ? zero : high) = o;
  const auto low_law = conditional_choice_distribution(g, OfflineSpec::opt(), v2, zero);
  // given X2 = 0 the prophet stops at v1, so v2 is never used
  CHECK(low_law.back() == doctest::Approx(1.0));
  const auto high_law = conditional_choice_distribution(g, OfflineSpec::opt(), v2, high);
  CHECK(high_law[g.slot(3)] == doctest::Approx(1.0));
  const auto x = edge_probabilities(g).x;
  CHECK(x[2] == doctest::Approx(0.5));
  CHECK(x[3] == doctest::Approx(0.5));
  CHECK(x[0] == doctest::Approx(0.5));
  CHECK(x[1] == doctest::Approx(0.0));
}

TEST_CASE("selection probabilities over all paths sum to one") {
  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    const Instance g = generate_random_instance(small_labeled(5), seed);
    double total = 0.0;
    for (const auto& p : oracle::all_st_paths(g)) total += selection_probability(g, OfflineSpec::opt(), p);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("edge probabilities sum to one across every closed cut") {
  int cuts = 0;
  for (std::uint64_t seed = 400; seed < 500; ++seed) {
    const Instance g = generate_random_instance(small_labeled(3 + seed % 5), seed);
    const auto x = edge_probabilities(g).x;
    for (const auto& in : oracle::closed_cuts(g)) {
      double sum = 0.0;
      for (const auto& e : g.edges())
        if (in[e.src] && !in[e.dst]) sum += x[e.id];
      CHECK(std::abs(sum - 1.0) < 1e-9);
      ++cuts;
    }
  }
  CHECK(cuts > 100);
}

TEST_CASE("online optimum matches an independent recursion") {
  for (std::uint64_t seed = 500; seed < 540; ++seed) {
    const Instance g = generate_random_instance(small_labeled(3 + seed % 5), seed);
    CHECK(optimal_online_value(g) == doctest::Approx(oracle::online_optimum(g)).epsilon(1e-12));
  }
  GeneratorParams p;
  p.family = "upper49";
  p.eps = 0.1;
  const Instance g = generate_family_instance(p).instance;
  CHECK(optimal_online_value(g) == doctest::Approx(2.0));
  CHECK(expected_opt(g).mean == doctest::Approx(4.25));
}

TEST_CASE("Monte Carlo expectation agrees with exact enumeration") {
  const Instance g = generate_random_instance(small_labeled(6), 77);
  const double exact = expected_opt(g).mean;
  const Estimate mc = expected_opt(g, OfflineSpec::opt(), {kDefaultEnumerationCap, true, 20000, 5});
  CHECK_FALSE(mc.exact);
  CHECK(mc.trials == 20000);
  CHECK(std::abs(mc.mean - exact) <= 4.0 * mc.std_error);
  const Estimate again = expected_opt(g, OfflineSpec::opt(), {kDefaultEnumerationCap, true, 20000, 5});
  CHECK(again.mean == mc.mean);
  const SelectionProfile prof = selection_profile(g, OfflineSpec::opt(), {kDefaultEnumerationCap, true, 20000, 5});
  double law_total = 0.0;
  for (double v : prof.law(0, 0)) law_total += v;
  CHECK(law_total == doctest::Approx(1.0));
}

TEST_CASE("caps on enumeration and capacity states are enforced") {
  const Instance g = generate_random_instance(small_labeled(7), 3);
  CHECK_THROWS_AS(expected_opt(g, OfflineSpec::opt(), {1, false, 0, 0}), EnumerationTooLarge);
  CHECK_THROWS_AS(expected_opt(g, OfflineSpec::opt(), {kDefaultEnumerationCap, true, 0, 0}), InvalidArgument);
}

TEST_CASE("labels that can never bind are not tracked") {
  InstanceBuilder b;
  b.add_node("s");
  b.add_node("t");
  const auto loose = b.add_label("loose", 5);
  const auto tight = b.add_label("tight", 1);
  b.add_edge(0, 1);
  b.add_edge(0, 1, {loose, tight});
  const CapacitySpace space(b.build());
  // a single edge carries each label, so neither can bind
  CHECK(space.tracked().empty());
  CHECK(space.size() == 1);
}
