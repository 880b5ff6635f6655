#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlgnn/errors.hpp"
#include "tlgnn/graph.hpp"
#include "tlgnn/subgraph.hpp"

#include <random>

using namespace tlgnn;

namespace {

Graph cycle(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::make(n, std::move(edges));
}

Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::make(n, std::move(edges));
}

Graph complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::make(n, std::move(edges));
}

int64_t census_count(const EnumerateResult& r, const char* kind, int size) {
  auto it = r.census.find({kind, size});
  return it == r.census.end() ? 0 : it->second;
}

}  // namespace

TEST_CASE("canonical forms") {
  CHECK(canonical_path({2, 1, 0}) == std::vector<int>{0, 1, 2});
  CHECK(canonical_path({0, 1, 2}) == std::vector<int>{0, 1, 2});
  CHECK(canonical_circuit({2, 3, 0, 1}) == std::vector<int>{0, 1, 2, 3});
  CHECK(canonical_circuit({2, 1, 0, 3}) == std::vector<int>{0, 1, 2, 3});
  // Asymmetric cycle: rotation to the minimum, then smaller direction.
  CHECK(canonical_circuit({4, 1, 3, 2}) == std::vector<int>{1, 3, 2, 4});
  CHECK(canonical_circuit({4, 2, 3, 1}) == std::vector<int>{1, 3, 2, 4});

  SubgraphRecord r{SubgraphKind::Circuit, {0, 1, 2, 3}};
  CHECK(r.canonical_key() == "C|0|1|2|3");
  CHECK(SubgraphRecord{SubgraphKind::Tree, {1, 0, 2}}.canonical_key() == "T|1|0|2");
}

TEST_CASE("record json round-trip") {
  SubgraphRecord r{SubgraphKind::Path, {3, 4, 5}};
  SubgraphRecord back = record_from_json(record_to_json(r));
  CHECK(back == r);
  CHECK_THROWS_AS(record_from_json(nlohmann::json{{"kind", "blob"}, {"nodes", {1}}}),
                  IngestError);
}

TEST_CASE("tree detection uses a strict degree threshold") {
  // K_{1,4} star: center degree 4 > 3 emits; leaves do not.
  Graph star = Graph::make(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto trees = count_trees(star, 3);
  REQUIRE(trees.size() == 1);
  CHECK(trees[0].kind == SubgraphKind::Tree);
  CHECK(trees[0].nodes == std::vector<int>{0, 1, 2, 3, 4});

  // K_{1,3}: degree 3 is not strictly greater than 3.
  Graph star3 = Graph::make(4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(count_trees(star3, 3).empty());
  CHECK(count_trees(star3, 2).size() == 1);

  CHECK(count_trees(cycle(6), 3).empty());
  CHECK(count_trees(complete(5), 3).size() == 5);
}

TEST_CASE("DpState init holds the one-hop table") {
  Graph g = path_graph(3);
  DpState st = DpState::init(g);
  CHECK(st.level(0, 1) == 1);
  CHECK(st.level(1, 0) == 1);
  CHECK(st.level(0, 2) == 0);
  CHECK(st.path(0, 1) == std::vector<int>{0});
  CHECK(st.path(1, 2) == std::vector<int>{1});
}

TEST_CASE("C4 at depth 1 yields its circuit and the distance-2 paths") {
  Graph g = cycle(4);
  auto r = enumerate_subgraphs(g, 1, 3);
  CHECK(census_count(r, "circuit", 4) == 1);
  CHECK(census_count(r, "path", 3) == 2);
  CHECK(census_count(r, "tree", 5) == 0);
  int circuits = 0;
  for (const auto& rec : r.records)
    if (rec.kind == SubgraphKind::Circuit) {
      ++circuits;
      CHECK(rec.nodes == std::vector<int>{0, 1, 2, 3});
    }
  CHECK(circuits == 1);
}

TEST_CASE("P4 at depth 1 covers distance-2 and distance-3 pairs, no circuits") {
  Graph g = path_graph(4);
  DpState st = DpState::init(g);
  auto r = enumerate_paths_circuits(g, 1, st);
  CHECK(census_count(r, "circuit", 3) + census_count(r, "circuit", 4) == 0);
  CHECK(census_count(r, "path", 3) == 2);   // 0-1-2 and 1-2-3
  CHECK(census_count(r, "path", 4) == 1);   // 0-1-2-3
  CHECK(st.level(0, 2) == 2);
  CHECK(st.level(0, 3) == 3);
  CHECK(st.path(0, 3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("a single edge produces nothing") {
  Graph g = Graph::make(2, {{0, 1}});
  auto r = enumerate_subgraphs(g, 1, 3);
  CHECK(r.records.empty());
  CHECK(r.census.empty());
}

TEST_CASE("empty and edgeless graphs are fine") {
  Graph g = Graph::make(0, {});
  CHECK(enumerate_subgraphs(g, 2, 3).records.empty());
  Graph iso = Graph::make(5, {});
  CHECK(enumerate_subgraphs(iso, 2, 3).records.empty());
}

TEST_CASE("depth 0 runs one sweep: trees plus 1-hop compositions") {
  // In K5 every pair is already adjacent, so no new pair (and no path record)
  // appears; composing three 1-hop segments still yields all triangles.
  auto r = enumerate_subgraphs(complete(5), 0, 3);
  CHECK(census_count(r, "tree", 5) == 5);
  CHECK(census_count(r, "circuit", 3) == 10);
  CHECK(r.records.size() == 15);
  for (const auto& rec : r.records) CHECK(rec.kind != SubgraphKind::Path);
}

TEST_CASE("stored table entries stay within the level/path invariant") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 8; ++t) {
    Graph g = random_graph(10, 0.35, 2, rng());
    DpState st = DpState::init(g);
    enumerate_paths_circuits(g, 3, st);
    for (int v = 0; v < g.node_count; ++v)
      for (int u = 0; u < g.node_count; ++u) {
        if (v == u) continue;
        uint16_t lvl = st.level(v, u);
        if (lvl == 0) {
          CHECK(st.path(v, u).empty());
          continue;
        }
        const auto& p = st.path(v, u);
        REQUIRE(p.size() == lvl);  // hop count == stored node count (u excluded)
        std::vector<int> full = p;
        full.push_back(u);
        CHECK(is_simple_path_of(g, full));
        CHECK(full.front() == v);
      }
  }
}

TEST_CASE("every record validates structurally against its host graph") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 6; ++t) {
    Graph g = random_graph(9, 0.4, 2, rng());
    auto r = enumerate_subgraphs(g, 3, 3);
    for (const auto& rec : r.records) {
      switch (rec.kind) {
        case SubgraphKind::Path:
          CHECK(is_simple_path_of(g, rec.nodes));
          CHECK(rec.nodes.front() < rec.nodes.back());
          break;
        case SubgraphKind::Circuit:
          CHECK(is_simple_circuit_of(g, rec.nodes));
          CHECK(rec.nodes.front() == *std::min_element(rec.nodes.begin(), rec.nodes.end()));
          break;
        case SubgraphKind::Tree:
          for (size_t i = 1; i < rec.nodes.size(); ++i)
            CHECK(g.has_edge(rec.nodes[0], rec.nodes[i]));
          break;
      }
    }
  }
}

TEST_CASE("no duplicate canonical keys in a result") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 6; ++t) {
    Graph g = random_graph(10, 0.4, 2, rng());
    auto r = enumerate_subgraphs(g, 3, 3);
    std::set<std::string> keys;
    for (const auto& rec : r.records) CHECK(keys.insert(rec.canonical_key()).second);
  }
}

TEST_CASE("DP output is a subset of the brute-force oracle") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 10; ++t) {
    Graph g = random_graph(8, 0.4, 2, rng());
    BruteForceSets oracle = brute_force_subgraphs(g, 12, 3);
    auto r = enumerate_subgraphs(g, 3, 3);
    for (const auto& rec : r.records) {
      std::string key = rec.canonical_key();
      bool found = false;
      switch (rec.kind) {
        case SubgraphKind::Path: found = oracle.paths.count(key) > 0; break;
        case SubgraphKind::Circuit: found = oracle.circuits.count(key) > 0; break;
        case SubgraphKind::Tree: found = oracle.trees.count(key) > 0; break;
      }
      CHECK(found);
    }
  }
}

TEST_CASE("brute-force counts on K4, C4, C6 match hand counts") {
  BruteForceSets k4 = brute_force_subgraphs(complete(4));
  CHECK(k4.circuits.size() == 7);  // four triangles + three 4-cycles

  BruteForceSets c4 = brute_force_subgraphs(cycle(4));
  CHECK(c4.circuits.size() == 1);
  CHECK(c4.paths.size() == 12);  // 4 edges + 4 of length 3 + 4 of length 4

  BruteForceSets c6 = brute_force_subgraphs(cycle(6));
  CHECK(c6.circuits.size() == 1);
  CHECK(c6.trees.empty());

  BruteForceSets empty5 = brute_force_subgraphs(Graph::make(5, {}));
  CHECK(empty5.paths.empty());
  CHECK(empty5.circuits.empty());
  CHECK(empty5.trees.empty());

  CHECK_THROWS_AS(brute_force_subgraphs(Graph::make(13, {})), BudgetError);
}

TEST_CASE("census matches the documented menagerie example") {
  // Disjoint union: a 6-node circuit, a 4-node path, a K_{1,3} star counted
  // with threshold 2 so the 4-node tree appears.
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 6; ++i) edges.emplace_back(i, (i + 1) % 6);
  edges.emplace_back(6, 7);
  edges.emplace_back(7, 8);
  edges.emplace_back(8, 9);
  edges.emplace_back(10, 11);
  edges.emplace_back(10, 12);
  edges.emplace_back(10, 13);
  Graph g = Graph::make(14, edges);
  auto r = enumerate_subgraphs(g, 3, 2);
  CHECK(census_count(r, "circuit", 6) == 1);
  CHECK(census_count(r, "path", 4) >= 1);
  CHECK(census_count(r, "tree", 4) == 1);
  int64_t total = 0;
  for (const auto& [k, v] : r.census) total += v;
  CHECK(total == static_cast<int64_t>(r.records.size()));
}

TEST_CASE("census-only mode matches the census of full records") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 4; ++t) {
    Graph g = random_graph(10, 0.35, 2, rng());
    auto full = enumerate_subgraphs(g, 3, 3);
    EnumerateOptions census_only;
    census_only.census_only = true;
    auto lean = enumerate_subgraphs(g, 3, 3, census_only);
    CHECK(lean.records.empty());
    CHECK(lean.census == full.census);
  }
}

TEST_CASE("path cap discards long candidates but keeps short ones") {
  Graph g = path_graph(8);
  EnumerateOptions opt;
  opt.max_path_nodes = 4;
  auto r = enumerate_subgraphs(g, 3, 3, opt);
  for (const auto& rec : r.records) CHECK(rec.nodes.size() <= 4);
  CHECK(census_count(r, "path", 3) == 6);
  CHECK(census_count(r, "path", 4) == 5);

  auto full = enumerate_subgraphs(g, 3, 3);
  CHECK(census_count(full, "path", 8) == 1);  // default cap 2^(D+1) = 16
}

TEST_CASE("enumeration is deterministic") {
  Graph g = random_graph(10, 0.4, 2, 555);
  auto a = enumerate_subgraphs(g, 3, 3);
  auto b = enumerate_subgraphs(g, 3, 3);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) CHECK(a.records[i] == b.records[i]);
  CHECK(a.census == b.census);
}

TEST_CASE("op_count grows with graph size and is deterministic") {
  Graph small = random_graph(16, 0.25, 2, 1);
  Graph big = random_graph(64, 0.25, 2, 1);
  DpState s1 = DpState::init(small), s1b = DpState::init(small), s2 = DpState::init(big);
  EnumerateOptions census_only;
  census_only.census_only = true;
  enumerate_paths_circuits(small, 2, s1, census_only);
  enumerate_paths_circuits(small, 2, s1b, census_only);
  enumerate_paths_circuits(big, 2, s2, census_only);
  CHECK(s1.op_count == s1b.op_count);
  CHECK(s1.op_count > 0);
  CHECK(s2.op_count > s1.op_count);
}

TEST_CASE("pair coverage is 1 on short-diameter graphs and bounded in general") {
  Graph g = cycle(4);
  DpState st = DpState::init(g);
  enumerate_paths_circuits(g, 1, st);
  CHECK(path_pair_coverage(g, 1, st) == 1.0);

  std::mt19937_64 rng(8);
  double worst = 1.0;
  for (int t = 0; t < 5; ++t) {
    Graph er = random_graph(12, 0.3, 2, rng());
    DpState s = DpState::init(er);
    enumerate_paths_circuits(er, 3, s);
    double cov = path_pair_coverage(er, 3, s);
    CHECK(cov >= 0.0);
    CHECK(cov <= 1.0);
    worst = std::min(worst, cov);
  }
  MESSAGE("worst measured pair coverage over 5 ER graphs: " << worst);
}

TEST_CASE("depth bounds are validated") {
  Graph g = cycle(4);
  DpState st = DpState::init(g);
  CHECK_THROWS_AS(enumerate_paths_circuits(g, -1, st), ConfigError);
  CHECK_THROWS_AS(enumerate_paths_circuits(g, 15, st), ConfigError);
}

TEST_CASE("census csv rendering") {
  std::map<std::pair<std::string, int>, int64_t> census;
  census[{"circuit", 4}] = 1;
  census[{"path", 3}] = 2;
  CHECK(census_to_csv(census) == "kind,node_count,count\ncircuit,4,1\npath,3,2\n");
}
