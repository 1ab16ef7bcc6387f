#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "prophet/errors.hpp"
#include "prophet/instances.hpp"
#include "prophet/path_cover.hpp"
#include "support/oracles.hpp"

using namespace prophet;

namespace {

// Maximum matching by trying every subset of edges, for tiny graphs.
std::size_t brute_matching(std::size_t left, std::size_t right, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::size_t best = 0;
  std::vector<bool> used_l(left, false);
  std::vector<bool> used_r(right, false);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t size) {
    best = std::max(best, size);
    if (i == edges.size()) return;
    rec(i + 1, size);
    const auto [u, v] = edges[i];
    if (used_l[u] || used_r[v]) return;
    used_l[u] = used_r[v] = true;
    rec(i + 1, size + 1);
    used_l[u] = used_r[v] = false;
  };
  rec(0, 0);
  return best;
}

RandomParams dag_params(std::size_t nodes) {
  RandomParams p;
  p.family = "layered";
  p.nodes = nodes;
  p.max_outcomes = 1;
  p.extra_edge_prob = 0.15;
  return p;
}

}  // namespace

TEST_CASE("Hopcroft-Karp finds maximum matchings") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t left = 1 + trial % 6;
    const std::size_t right = 1 + (trial / 6) % 6;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    HopcroftKarp hk(left, right);
    for (std::size_t u = 0; u < left; ++u)
      for (std::size_t v = 0; v < right; ++v)
        if (uniform01(rng) < 0.35) {
          edges.push_back({u, v});
          hk.add_edge(u, v);
        }
    const std::size_t size = hk.run();
    CHECK(size == brute_matching(left, right, edges));
    std::size_t matched = 0;
    for (std::size_t u = 0; u < left; ++u) {
      if (auto v = hk.mate_of_left(u)) {
        ++matched;
        CHECK(hk.mate_of_right(*v) == std::optional<std::size_t>(u));
      }
    }
    CHECK(matched == size);
  }
}

TEST_CASE("minimum cover is valid, uses unlabeled paths, and matches the largest antichain") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomParams p = dag_params(3 + seed % 12);
    p.labels = seed % 2;
    p.max_outcomes = 1;
    const Instance g = generate_random_instance(p, seed);
    const PathCover cover = min_path_cover(g);
    CHECK(is_valid_cover(g, cover));
    for (const auto& path : cover.paths)
      for (EdgeId e : path) CHECK_FALSE(g.edge(e).labeled());
    const std::size_t antichain = oracle::largest_antichain(g);
    CHECK(cover.size() == antichain);
    CHECK(max_antichain_bruteforce(g).size() == antichain);
    CHECK(graph_width(g) == antichain);
  }
}

TEST_CASE("cover seed changes path choice but never the size") {
  const Instance g = generate_random_instance(dag_params(12), 4242);
  const std::size_t k = min_path_cover(g).size();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const PathCover c = min_path_cover(g, s);
    CHECK(c.size() == k);
    CHECK(is_valid_cover(g, c));
    CHECK(min_path_cover(g, s).paths == c.paths);
  }
}

TEST_CASE("widths of the standard constructions") {
  GeneratorParams p;
  p.family = "classic";
  p.n = 5;
  CHECK(graph_width(generate_family_instance(p).instance) == 1);
  for (std::size_t k = 1; k <= 4; ++k) {
    GeneratorParams q;
    q.family = "kplus1";
    q.k = k;
    CHECK(min_path_cover(generate_family_instance(q).instance).size() == k);
  }
  GeneratorParams m;
  m.family = "markets";
  m.m = 3;
  CHECK(graph_width(generate_family_instance(m).instance) == 3);
}

TEST_CASE("explicit covers are checked") {
  GeneratorParams q;
  q.family = "kplus1";
  q.k = 2;
  const Instance g = generate_family_instance(q).instance;
  // edges: 0 s->u1, 1 u1->t, 2 s->u2, 3 u2->t, 4 s->t
  CHECK_NOTHROW(make_cover(g, {{0, 1}, {2, 3}}));
  CHECK_THROWS_AS(make_cover(g, {{0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(make_cover(g, {{0, 3}}), InvalidArgument);
  PathCover partial;
  partial.paths = {{4}};
  partial.node_orders = {{0, 3}};
  CHECK_FALSE(is_valid_cover(g, partial));
}

TEST_CASE("antichain search refuses large graphs") {
  const Instance g = generate_random_instance(dag_params(25), 1);
  CHECK_THROWS_AS(max_antichain_bruteforce(g), InvalidArgument);
}
