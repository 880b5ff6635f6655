#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlgnn/errors.hpp"
#include "tlgnn/graph.hpp"
#include "tlgnn/isomorphism.hpp"
#include "tlgnn/png.hpp"
#include "tlgnn/wl.hpp"

#include <algorithm>
#include <map>

using namespace tlgnn;

namespace {

Graph cycle(int n, std::vector<std::vector<double>> feats = {}) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::make(n, std::move(edges), std::move(feats));
}

std::multiset<int> degree_multiset(const Graph& g) {
  std::multiset<int> out;
  for (int v = 0; v < g.node_count; ++v) out.insert(g.degree(v));
  return out;
}

}  // namespace

TEST_CASE("C6 to two triangles is the canonical positive example") {
  Graph c6 = cycle(6);
  SwapWitness w;
  w.removed = {{{2, 3}, {5, 0}}};
  w.added = {{{2, 0}, {5, 3}}};
  Graph sib = apply_swap(c6, w);
  CHECK(sib.has_edge(0, 2));
  CHECK(sib.has_edge(3, 5));
  CHECK(!sib.has_edge(2, 3));
  CHECK(sib.edge_count() == 6);

  auto witness = check_png(c6, sib);
  REQUIRE(witness.has_value());
  CHECK(wl_equivalent(c6, sib));
  CHECK(!is_isomorphic_small(c6, sib));
  CHECK(degree_multiset(c6) == degree_multiset(sib));

  // The found witness maps c6 to the sibling when applied.
  Graph replay = apply_swap(c6, *witness);
  CHECK(replay == sib);
}

TEST_CASE("check_png is symmetric and rejects the identity") {
  Graph c6 = cycle(6);
  SwapWitness w;
  w.removed = {{{2, 3}, {5, 0}}};
  w.added = {{{2, 0}, {5, 3}}};
  Graph sib = apply_swap(c6, w);
  CHECK(check_png(sib, c6).has_value());
  CHECK(!check_png(c6, c6).has_value());  // zero edge difference is not a swap
}

TEST_CASE("check_png rejects structural mismatches") {
  CHECK(!check_png(cycle(6), cycle(5)).has_value());

  // Equal counts but a 6-edge symmetric difference: C6 vs a different wiring.
  Graph c6 = cycle(6);
  Graph star_ish = Graph::make(6, {{0, 2}, {2, 4}, {4, 0}, {1, 3}, {3, 5}, {5, 1}});
  auto w = check_png(c6, star_ish);
  // This happens to be two triangles again but reached by three swaps; the
  // symmetric difference is larger than one swap, so no witness exists.
  CHECK(!w.has_value());

  // Feature mismatch at a fixed index.
  Graph a = cycle(4, {{1}, {1}, {1}, {1}});
  Graph b = cycle(4, {{1}, {1}, {1}, {2}});
  CHECK(!check_png(a, b).has_value());
}

TEST_CASE("neighbor feature multisets must be preserved per node") {
  // Path 0-1-2-3 with distinct end features; swapping ends changes node 1's
  // and node 2's neighborhood multisets even though edge counts match.
  Graph p = Graph::make(4, {{0, 1}, {1, 2}, {2, 3}}, {{5}, {1}, {1}, {7}});
  Graph q = Graph::make(4, {{0, 2}, {2, 1}, {1, 3}}, {{5}, {1}, {1}, {7}});
  CHECK(!check_png(p, q).has_value());
}

TEST_CASE("apply_swap validates its inputs") {
  Graph c6 = cycle(6);
  SwapWitness bad;
  bad.removed = {{{0, 2}, {3, 4}}};  // (0,2) is not an edge
  bad.added = {{{0, 4}, {3, 2}}};
  CHECK_THROWS_AS(apply_swap(c6, bad), ConfigError);

  SwapWitness dup;
  dup.removed = {{{0, 1}, {1, 2}}};  // shares endpoint 1
  dup.added = {{{0, 2}, {1, 1}}};
  CHECK_THROWS_AS(apply_swap(c6, dup), ConfigError);

  SwapWitness exists;
  exists.removed = {{{0, 1}, {2, 3}}};
  exists.added = {{{1, 2}, {0, 3}}};  // both already edges of C6
  CHECK_THROWS_AS(apply_swap(c6, exists), ConfigError);
}

TEST_CASE("generated pairs satisfy every sibling condition") {
  SpngOptions opt;
  opt.pair_count = 12;
  opt.node_count = 10;
  opt.edge_prob = 0.3;
  opt.feature_alphabet = 2;
  opt.seed = 4;
  SpngResult r = generate_spng(opt);
  REQUIRE(static_cast<int>(r.pairs.size()) == opt.pair_count);
  for (const auto& pair : r.pairs) {
    CHECK(check_png(pair.first, pair.second).has_value());
    CHECK(pair.wl_certified);
    CHECK(wl_equivalent(pair.first, pair.second));
    CHECK(pair.iso_certified);
    CHECK(!is_isomorphic_small(pair.first, pair.second));
    CHECK(degree_multiset(pair.first) == degree_multiset(pair.second));
    for (int v = 0; v < pair.first.node_count; ++v)
      CHECK(pair.first.node_features[v] == pair.second.node_features[v]);
  }

  // Interleaved dataset with alternating labels.
  REQUIRE(r.dataset.graphs.size() == 2 * r.pairs.size());
  CHECK(r.dataset.graphs[0].graph_label == 0);
  CHECK(r.dataset.graphs[1].graph_label == 1);
  CHECK(r.dataset.graphs[0] == [&] {
    Graph g = r.pairs[0].first;
    g.graph_label = 0;
    return g;
  }());
  CHECK(r.dataset.class_count == 2);
}

TEST_CASE("generation is deterministic under the seed") {
  SpngOptions opt;
  opt.pair_count = 5;
  opt.node_count = 10;
  opt.seed = 9;
  opt.edge_prob = 0.3;
  SpngResult a = generate_spng(opt);
  SpngResult b = generate_spng(opt);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (size_t i = 0; i < a.pairs.size(); ++i) {
    CHECK(a.pairs[i].first == b.pairs[i].first);
    CHECK(a.pairs[i].second == b.pairs[i].second);
  }
  opt.seed = 10;
  SpngResult c = generate_spng(opt);
  CHECK(!(a.pairs[0].first == c.pairs[0].first));
}

TEST_CASE("budget exhaustion raises GenerationBudgetError with statistics") {
  SpngOptions opt;
  opt.pair_count = 3;
  opt.node_count = 4;     // tiny graphs essentially never pass the WL filter
  opt.edge_prob = 0.2;
  opt.max_base_graphs = 50;
  opt.seed = 1;
  try {
    generate_spng(opt);
    FAIL("expected GenerationBudgetError");
  } catch (const GenerationBudgetError& e) {
    std::string msg = e.what();
    CHECK(msg.find("exhausted") != std::string::npos);
    CHECK(msg.find("wl rejects") != std::string::npos);
  }
}

TEST_CASE("pair_separation_score reduces componentwise differences") {
  PngPair pair;
  pair.first = cycle(4);
  pair.second = cycle(4);
  auto embed = [](const Graph& g) {
    return std::vector<double>{static_cast<double>(g.edge_count()),
                               static_cast<double>(g.degree(0))};
  };
  CHECK(pair_separation_score(embed, pair) == 0.0);

  pair.second = Graph::make(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(pair_separation_score(embed, pair) == 1.0);

  auto ragged = [count = 0](const Graph&) mutable {
    return std::vector<double>(++count, 0.0);
  };
  CHECK_THROWS_AS(pair_separation_score(ragged, pair), ConfigError);
}

TEST_CASE("witness json reports pairs and rejection statistics") {
  SpngOptions opt;
  opt.pair_count = 2;
  opt.node_count = 10;
  opt.edge_prob = 0.3;
  opt.seed = 4;
  SpngResult r = generate_spng(opt);
  nlohmann::json j = spng_witness_json(r, opt);
  CHECK(j["pairs"].size() == 2);
  CHECK(j.contains("stats"));
  CHECK(j["options"]["node_count"] == 10);
}
