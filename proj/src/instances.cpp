#include "prophet/instances.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "prophet/errors.hpp"

namespace prophet {

namespace {

const DiscreteLaw& law_at(const std::vector<DiscreteLaw>& laws, std::size_t i, const DiscreteLaw& fallback) {
  return laws.empty() ? fallback : laws[i % laws.size()];
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0,1)");
}

void check_law(const DiscreteLaw& law) {
  if (law.empty()) throw InvalidArgument("empty distribution");
  double total = 0.0;
  for (const auto& [mass, value] : law) {
    if (!(mass >= 0.0) || !std::isfinite(value) || value < 0.0)
      throw InvalidArgument("distribution needs nonnegative masses and finite nonnegative values");
    total += mass;
  }
  if (std::abs(total - 1.0) > kTolerance) throw InvalidArgument("distribution masses do not sum to 1");
}

GeneratedInstance classic(const GeneratorParams& p) {
  const std::size_t n = p.n == 0 ? 5 : p.n;
  if (n < 2) throw InvalidArgument("classic needs n >= 2");
  std::vector<DiscreteLaw> laws = p.laws;
  if (laws.empty()) {
    check_eps(p.eps);
    laws.push_back(constant_law(1.0));
    for (std::size_t i = 1; i < n; ++i) laws.push_back(bernoulli_law(p.eps));
  }
  for (const auto& law : laws) check_law(law);

  InstanceBuilder b;
  std::vector<NodeIndex> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back(b.add_node("v" + std::to_string(i)));
  const NodeIndex t = b.add_node("t");
  std::vector<EdgeId> backbone;
  for (std::size_t i = 0; i < n; ++i) backbone.push_back(b.add_edge(v[i], i + 1 < n ? v[i + 1] : t));
  std::vector<EdgeId> bypass;
  for (std::size_t i = 0; i + 1 < n; ++i) bypass.push_back(b.add_edge(v[i], t));
  if (p.parallel_last) bypass.push_back(b.add_edge(v[n - 1], t));
  for (std::size_t i = 0; i < n; ++i) {
    const EdgeId carrier = i < bypass.size() ? bypass[i] : backbone[i];
    b.set_independent(v[i], {{carrier, laws[i % laws.size()]}});
  }
  GeneratedInstance out{b.build(), {}};
  out.metadata["family"] = "classic";
  out.metadata["n"] = n;
  out.metadata["parallel_last"] = p.parallel_last;
  out.metadata["backbone"] = backbone;
  return out;
}

GeneratedInstance overtime(const GeneratorParams& p) {
  const std::size_t n = p.n == 0 ? 4 : p.n;
  std::vector<int> terms = p.terms.empty() ? std::vector<int>{1, 2, 3} : p.terms;
  const DiscreteLaw fallback{{0.5, 0.0}, {0.3, 1.0}, {0.2, 4.0}};
  for (int term : terms)
    if (term < 1) throw InvalidArgument("lease terms must be >= 1");
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

  InstanceBuilder b;
  std::vector<NodeIndex> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back(b.add_node("v" + std::to_string(i)));
  v.push_back(b.add_node("t"));
  for (std::size_t i = 0; i < n; ++i) {
    std::map<EdgeId, double> multiplier;
    multiplier[b.add_edge(v[i], v[i + 1])] = 0.0;  // no hire this step
    for (int term : terms) {
      if (i + static_cast<std::size_t>(term) > n) break;
      multiplier[b.add_edge(v[i], v[i + term])] = term;
    }
    const DiscreteLaw& law = law_at(p.laws, i, fallback);
    check_law(law);
    b.set_shared_draw(v[i], law, multiplier);
  }
  GeneratedInstance out{b.build(), {}};
  out.metadata["family"] = "overtime";
  out.metadata["n"] = n;
  out.metadata["terms"] = terms;
  return out;
}

GeneratedInstance markets(const GeneratorParams& p) {
  const std::size_t n = p.n == 0 ? 3 : p.n;
  if (p.m < 1) throw InvalidArgument("markets needs m >= 1");
  const std::size_t m = static_cast<std::size_t>(p.m);
  std::vector<int> terms = p.terms.empty() ? std::vector<int>{1, 2} : p.terms;
  for (int term : terms)
    if (term < 1) throw InvalidArgument("lease terms must be >= 1");
  if (std::find(terms.begin(), terms.end(), 1) == terms.end())
    throw InvalidArgument("markets needs term 1 so every step has a successor");
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  const DiscreteLaw fallback{{0.5, 1.0}, {0.5, 3.0}};

  InstanceBuilder b;
  const NodeIndex s = b.add_node("s");
  std::vector<std::vector<NodeIndex>> at(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t mk = 0; mk < m; ++mk) {
      at[i].push_back(b.add_node(std::string(1, static_cast<char>('a' + mk % 26)) + std::to_string(i) +
                                 (mk >= 26 ? "_" + std::to_string(mk) : "")));
    }
  }
  const NodeIndex t = b.add_node("t");
  for (std::size_t mk = 0; mk < m; ++mk) b.add_edge(s, at[1][mk]);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t mk = 0; mk < m; ++mk) {
      std::map<EdgeId, double> multiplier;
      for (int term : terms) {
        const std::size_t next = i + static_cast<std::size_t>(term);
        if (next > n + 1) break;
        // one edge per market to switch to; paired edges share the value
        for (std::size_t to = 0; to < m; ++to) multiplier[b.add_edge(at[i][mk], next == n + 1 ? t : at[next][to])] = term;
      }
      const DiscreteLaw& law = law_at(p.laws, (i - 1) * m + mk, fallback);
      check_law(law);
      b.set_shared_draw(at[i][mk], law, multiplier);
    }
  }
  GeneratedInstance out{b.build(), {}};
  out.metadata["family"] = "markets";
  out.metadata["n"] = n;
  out.metadata["markets"] = m;
  out.metadata["terms"] = terms;
  return out;
}

GeneratedInstance upper49(const GeneratorParams& p) {
  check_eps(p.eps);
  InstanceBuilder b;
  const NodeIndex s = b.add_node("s");
  const NodeIndex a = b.add_node("a");
  const NodeIndex c = b.add_node("b");
  const NodeIndex t = b.add_node("t");
  const LabelIndex red = b.add_label("red", 1);
  const EdgeId sa = b.add_edge(s, a);
  const EdgeId sa_red = b.add_edge(s, a, {red});
  const EdgeId st = b.add_edge(s, t);
  const EdgeId ab = b.add_edge(a, c);
  const EdgeId at = b.add_edge(a, t);
  const EdgeId bt = b.add_edge(c, t);
  const EdgeId bt_red = b.add_edge(c, t, {red});
  b.add_outcome(s, 1.0, {{sa, 0.0}, {sa_red, 1.0}, {st, 2.0}});
  b.set_independent(a, {{ab, constant_law(0.0)}, {at, bernoulli_law(0.5)}});
  b.set_independent(c, {{bt, constant_law(0.0)}, {bt_red, {{p.eps, 2.0 / p.eps}, {1.0 - p.eps, 0.0}}}});
  GeneratedInstance out{b.build(), {}};
  out.metadata["family"] = "upper49";
  out.metadata["eps"] = p.eps;
  out.metadata["expected_opt"] = 2.0 + 3.0 * (1.0 - p.eps) / 2.0 + 2.0 * (1.0 - p.eps) / 2.0;
  out.metadata["optimal_online_value"] = 2.0;
  out.metadata["focal_path"] = std::vector<EdgeId>{sa, ab, bt};
  return out;
}

std::size_t grid_columns(std::size_t k) { return std::max<std::size_t>(k, 4); }

GeneratedInstance grid(const GeneratorParams& p) {
  check_eps(p.eps);
  const std::size_t k = p.k;
  if (k < 2) throw InvalidArgument("grid needs k >= 2");
  const std::size_t cols = grid_columns(k);
  InstanceBuilder b;
  auto node = [&](std::size_t r, std::size_t c) { return r * cols + c; };
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      std::string name = "r" + std::to_string(r) + "c" + std::to_string(c);
      if (r == 0 && c == 0) name = "s";
      if (r == k - 1 && c == cols - 1) name = "t";
      b.add_node(name);
    }
  const NodeIndex t = node(k - 1, cols - 1);
  std::map<NodeIndex, std::vector<std::pair<EdgeId, DiscreteLaw>>> laws;
  // vertical edges first so that ties prefer going down a column
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r + 1 < k; ++r) {
      const EdgeId e = b.add_edge(node(r, c), node(r + 1, c));
      if (c == 1) laws[node(r, c)].push_back({e, constant_law(1.0)});
      if (c == 2) laws[node(r, c)].push_back({e, bernoulli_law(p.eps)});
    }
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c + 1 < cols; ++c) b.add_edge(node(r, c), node(r, c + 1));
  const EdgeId extra_ones = b.add_edge(node(k - 1, 1), t);
  const EdgeId extra_risky = b.add_edge(node(k - 1, 2), t);
  laws[node(k - 1, 1)].push_back({extra_ones, constant_law(1.0)});
  laws[node(k - 1, 2)].push_back({extra_risky, bernoulli_law(p.eps)});
  for (const auto& [u, list] : laws) b.set_independent(u, list);

  GeneratedInstance out{b.build(), {}};
  out.metadata["family"] = "grid";
  out.metadata["k"] = k;
  out.metadata["columns"] = cols;
  out.metadata["eps"] = p.eps;
  out.metadata["expected_opt_lower_bound"] = 2.0 * k - static_cast<double>(k * k) * p.eps;
  return out;
}

GeneratedInstance kplus1(const GeneratorParams& p) {
  check_eps(p.eps);
  const std::size_t k = p.k;
  if (k < 1) throw InvalidArgument("kplus1 needs k >= 1");
  InstanceBuilder b;
  const NodeIndex s = b.add_node("s");
  std::vector<NodeIndex> mid;
  for (std::size_t i = 1; i <= k; ++i) mid.push_back(b.add_node("u" + std::to_string(i)));
  const NodeIndex t = b.add_node("t");
  std::map<EdgeId, double> from_s;
  for (std::size_t i = 0; i < k; ++i) {
    from_s[b.add_edge(s, mid[i])] = 0.0;
    const EdgeId risky = b.add_edge(mid[i], t);
    b.set_independent(mid[i], {{risky, bernoulli_law(p.eps)}});
  }
  from_s[b.add_edge(s, t)] = 1.0;
  b.add_outcome(s, 1.0, from_s);
  GeneratedInstance out{b.build(), {}};
  const double miss = std::pow(1.0 - p.eps, static_cast<double>(k));
  out.metadata["family"] = "kplus1";
  out.metadata["k"] = k;
  out.metadata["eps"] = p.eps;
  out.metadata["expected_opt"] = (1.0 / p.eps) * (1.0 - miss) + miss;
  out.metadata["optimal_online_value"] = 1.0;
  return out;
}

GeneratedInstance mchoice(const GeneratorParams& p) {
  const std::size_t n = p.n == 0 ? 4 : p.n;
  if (p.m < 1) throw InvalidArgument("mchoice needs capacity m >= 1");
  const DiscreteLaw fallback{{0.5, 0.0}, {0.3, 1.0}, {0.2, 3.0}};
  InstanceBuilder b;
  std::vector<NodeIndex> v;
  v.push_back(b.add_node("s"));
  for (std::size_t i = 1; i < n; ++i) v.push_back(b.add_node("v" + std::to_string(i)));
  v.push_back(b.add_node("t"));
  const LabelIndex pick = b.add_label("pick", p.m);
  for (std::size_t i = 0; i < n; ++i) {
    b.add_edge(v[i], v[i + 1]);
    const EdgeId take = b.add_edge(v[i], v[i + 1], {pick});
    const DiscreteLaw& law = law_at(p.laws, i, fallback);
    check_law(law);
    b.set_independent(v[i], {{take, law}});
  }
  GeneratedInstance out{b.build(), {}};
  out.metadata["family"] = "mchoice";
  out.metadata["n"] = n;
  out.metadata["m"] = p.m;
  return out;
}

GeneratedInstance vertex_matching(const GeneratorParams& p) {
  const std::size_t n = p.n == 0 ? 3 : p.n;
  if (p.m < 1) throw InvalidArgument("vertex-matching needs at least one item");
  const std::size_t items = static_cast<std::size_t>(p.m);
  InstanceBuilder b;
  std::vector<NodeIndex> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back(b.add_node("bidder" + std::to_string(i)));
  v.push_back(b.add_node("t"));
  std::vector<LabelIndex> item_label;
  for (std::size_t j = 0; j < items; ++j) item_label.push_back(b.add_label("item" + std::to_string(j + 1), 1));
  for (std::size_t i = 0; i < n; ++i) {
    b.add_edge(v[i], v[i + 1]);  // bidder stays unmatched
    std::vector<std::pair<EdgeId, DiscreteLaw>> laws;
    for (std::size_t j = 0; j < items; ++j) {
      const EdgeId e = b.add_edge(v[i], v[i + 1], {item_label[j]});
      const DiscreteLaw fallback{{0.5, 0.0}, {0.5, 1.0 + static_cast<double>((i + 2 * j) % 3)}};
      const DiscreteLaw& law = law_at(p.laws, i * items + j, fallback);
      check_law(law);
      laws.push_back({e, law});
    }
    b.set_independent(v[i], laws);
  }
  GeneratedInstance out{b.build(), {}};
  out.metadata["family"] = "vertex-matching";
  out.metadata["bidders"] = n;
  out.metadata["items"] = items;
  return out;
}

}  // namespace

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"classic", "overtime", "markets", "upper49",
                                              "grid",    "kplus1",   "mchoice", "vertex-matching"};
  return names;
}

GeneratedInstance generate_family_instance(const GeneratorParams& params) {
  const std::string& f = params.family;
  GeneratedInstance out;
  if (f == "classic") out = classic(params);
  else if (f == "overtime") out = overtime(params);
  else if (f == "markets") out = markets(params);
  else if (f == "upper49") out = upper49(params);
  else if (f == "grid") out = grid(params);
  else if (f == "kplus1") out = kplus1(params);
  else if (f == "mchoice") out = mchoice(params);
  else if (f == "vertex-matching") out = vertex_matching(params);
  else throw InvalidArgument("unknown family '" + f + "'");
  require_valid(out.instance);
  return out;
}

Instance classic_hard_pair(double eps) {
  GeneratorParams p;
  p.family = "classic";
  p.n = 2;
  p.eps = eps;
  p.parallel_last = true;
  return generate_family_instance(p).instance;
}

std::vector<std::vector<EdgeId>> grid_cover(const Instance& g, std::size_t k, bool horizontal) {
  const std::size_t cols = g.node_count() / k;
  if (k < 2 || cols * k != g.node_count()) throw InvalidArgument("instance is not a grid of the given size");
  auto node = [&](std::size_t r, std::size_t c) { return r * cols + c; };
  auto edge = [&](NodeIndex from, NodeIndex to) {
    for (EdgeId e : g.out_edges(from))
      if (g.edge(e).dst == to) return e;  // smallest id: the grid edge, not the extra one
    throw InvalidArgument("missing grid edge");
  };
  std::vector<std::vector<EdgeId>> paths;
  if (horizontal) {
    for (std::size_t r = 0; r < k; ++r) {
      std::vector<EdgeId> path;
      for (std::size_t i = 0; i < r; ++i) path.push_back(edge(node(i, 0), node(i + 1, 0)));
      for (std::size_t c = 0; c + 1 < cols; ++c) path.push_back(edge(node(r, c), node(r, c + 1)));
      for (std::size_t i = r; i + 1 < k; ++i) path.push_back(edge(node(i, cols - 1), node(i + 1, cols - 1)));
      paths.push_back(std::move(path));
    }
  } else {
    // the two columns with an extra edge to t finish along it
    const EdgeId extra_ones = g.edge_count() - 2;
    const EdgeId extra_risky = g.edge_count() - 1;
    for (std::size_t c = 0; c < cols; ++c) {
      std::vector<EdgeId> path;
      for (std::size_t i = 0; i < c; ++i) path.push_back(edge(node(0, i), node(0, i + 1)));
      for (std::size_t r = 0; r + 1 < k; ++r) path.push_back(edge(node(r, c), node(r + 1, c)));
      if (c == 1 || c == 2) {
        path.push_back(c == 1 ? extra_ones : extra_risky);
      } else {
        for (std::size_t i = c; i + 1 < cols; ++i) path.push_back(edge(node(k - 1, i), node(k - 1, i + 1)));
      }
      paths.push_back(std::move(path));
    }
  }
  return paths;
}

// ---------------------------------------------------------------------------
// Random families

namespace {

struct RandomBuilder {
  Rng rng;
  const RandomParams& p;
  InstanceBuilder b;
  std::vector<LabelIndex> labels;

  std::size_t pick(std::size_t lo, std::size_t hi) {  // inclusive
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  }
  bool coin(double prob) { return uniform01(rng) < prob; }

  void make_labels() {
    for (std::size_t l = 0; l < p.labels; ++l)
      labels.push_back(b.add_label("L" + std::to_string(l), static_cast<int>(pick(1, std::max(1, p.max_capacity)))));
  }

  // Labeled copy next to an existing unlabeled edge.
  void maybe_label_copy(NodeIndex u, NodeIndex v) {
    if (labels.empty() || !coin(p.labeled_prob)) return;
    std::vector<LabelIndex> pool = labels;
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t count = pick(1, std::max<std::size_t>(1, std::min(p.max_labels_per_edge, pool.size())));
    pool.resize(count);
    b.add_edge(u, v, pool);
  }

  void add_tables(const std::vector<std::vector<EdgeId>>& out) {
    for (NodeIndex u = 0; u < out.size(); ++u) {
      if (out[u].empty()) continue;
      const std::size_t count = pick(1, std::max<std::size_t>(1, p.max_outcomes));
      std::vector<double> weights(count);
      double total = 0.0;
      for (auto& w : weights) total += (w = static_cast<double>(pick(1, 4)));
      for (std::size_t o = 0; o < count; ++o) {
        std::map<EdgeId, double> values;
        for (EdgeId e : out[u]) values[e] = static_cast<double>(pick(0, static_cast<std::size_t>(std::max(0, p.max_value))));
        b.add_outcome(u, weights[o] / total, values);
      }
    }
  }
};

}  // namespace

Instance generate_random_instance(const RandomParams& p, std::uint64_t seed) {
  RandomBuilder rb{Rng(seed), p, {}, {}};
  InstanceBuilder& b = rb.b;
  std::vector<std::pair<NodeIndex, NodeIndex>> structural;

  if (p.family == "layered" || p.family == "width1") {
    const std::size_t n = std::max<std::size_t>(2, p.nodes);
    for (std::size_t i = 0; i < n; ++i) b.add_node(i == 0 ? "s" : i + 1 == n ? "t" : "v" + std::to_string(i));
    std::vector<std::size_t> indeg(n, 0);
    if (p.family == "width1") {
      for (std::size_t u = 0; u + 1 < n; ++u) structural.push_back({u, u + 1});
    } else {
      for (std::size_t u = 0; u + 1 < n; ++u) structural.push_back({u, rb.pick(u + 1, n - 1)});
      for (const auto& [u, v] : structural) ++indeg[v];
      for (std::size_t v = 1; v < n; ++v)
        if (indeg[v] == 0) structural.push_back({rb.pick(0, v - 1), v});
    }
    for (std::size_t u = 0; u + 1 < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (rb.coin(p.extra_edge_prob)) structural.push_back({u, v});
  } else if (p.family == "disjoint") {
    const std::size_t k = std::max<std::size_t>(1, p.strands);
    std::vector<std::vector<NodeIndex>> strands(k);
    std::size_t next = 1;
    for (auto& strand : strands) {
      const std::size_t len = rb.pick(1, std::max<std::size_t>(1, p.max_strand_length));
      for (std::size_t i = 0; i < len; ++i) strand.push_back(next++);
    }
    b.add_node("s");
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < strands[i].size(); ++j)
        b.add_node("p" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    const NodeIndex t = b.add_node("t");
    for (const auto& strand : strands) {
      std::vector<NodeIndex> chain{0};
      chain.insert(chain.end(), strand.begin(), strand.end());
      chain.push_back(t);
      for (std::size_t j = 0; j + 1 < chain.size(); ++j) structural.push_back({chain[j], chain[j + 1]});
      for (std::size_t a = 0; a + 2 < chain.size(); ++a)
        for (std::size_t c = a + 2; c < chain.size(); ++c)
          if (rb.coin(p.extra_edge_prob)) structural.push_back({chain[a], chain[c]});
    }
    if (rb.coin(p.extra_edge_prob)) structural.push_back({0, t});
  } else {
    throw InvalidArgument("unknown random family '" + p.family + "'");
  }

  rb.make_labels();
  std::sort(structural.begin(), structural.end());
  for (const auto& [u, v] : structural) {
    b.add_edge(u, v);
    rb.maybe_label_copy(u, v);
  }
  // out-edge lists in id order, as the builder will store them
  std::vector<std::vector<EdgeId>> out(b.node_count());
  {
    const Instance skeleton = b.build();
    for (NodeIndex u = 0; u < skeleton.node_count(); ++u) out[u] = skeleton.out_edges(u);
  }
  rb.add_tables(out);
  return b.build();
}

}  // namespace prophet
