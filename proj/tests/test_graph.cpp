#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlgnn/errors.hpp"
#include "tlgnn/graph.hpp"

using namespace tlgnn;

namespace {

Graph path3() {
  return Graph::make(3, {{0, 1}, {1, 2}}, {}, 0);
}

}  // namespace

TEST_CASE("make normalizes, deduplicates and sorts edges") {
  Graph g = Graph::make(4, {{2, 1}, {1, 2}, {3, 0}, {0, 3}}, {}, -1);
  REQUIRE(g.edge_count() == 2);
  CHECK(g.edges[0] == std::pair<int, int>{0, 3});
  CHECK(g.edges[1] == std::pair<int, int>{1, 2});
  CHECK(g.feature_width() == 1);
  CHECK(g.node_features[0][0] == 1.0);
}

TEST_CASE("make rejects malformed input") {
  CHECK_THROWS_AS(Graph::make(2, {{0, 0}}, {}, 0), IngestError);
  CHECK_THROWS_AS(Graph::make(2, {{0, 2}}, {}, 0), IngestError);
  CHECK_THROWS_AS(Graph::make(2, {{-1, 0}}, {}, 0), IngestError);
  CHECK_THROWS_AS(Graph::make(2, {}, {{1.0}, {1.0}, {1.0}}, 0), IngestError);
  CHECK_THROWS_AS(Graph::make(2, {}, {{1.0}, {1.0, 2.0}}, 0), IngestError);
  CHECK_THROWS_AS(Graph::make(-1, {}, {}, 0), IngestError);
}

TEST_CASE("has_edge and degree agree with the edge list") {
  Graph g = path3();
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK(!g.has_edge(0, 2));
  CHECK(g.degree(1) == 2);
  CHECK(g.degree(0) == 1);
  auto adj = g.adjacency_list();
  CHECK(adj[1] == std::vector<int>{0, 2});
}

TEST_CASE("relabel permutes structure and features consistently") {
  Graph g = Graph::make(3, {{0, 1}, {1, 2}}, {{1, 0}, {0, 1}, {1, 1}}, 1);
  Graph r = relabel(g, {2, 0, 1});  // node v goes to position perm[v]
  CHECK(r.has_edge(2, 0));
  CHECK(r.has_edge(0, 1));
  CHECK(!r.has_edge(2, 1));
  CHECK(r.node_features[2] == std::vector<double>{1, 0});
  CHECK(r.node_features[0] == std::vector<double>{0, 1});
  CHECK(r.graph_label == 1);
  CHECK_THROWS_AS(relabel(g, {0, 0, 1}), ConfigError);
  CHECK_THROWS_AS(relabel(g, {0, 1}), ConfigError);
}

TEST_CASE("graph json round-trip is exact") {
  Graph g = Graph::make(3, {{0, 1}, {1, 2}}, {{0.5, 1.25}, {2, 3}, {4, 5}}, 1);
  Graph back = graph_from_json(graph_to_json(g));
  CHECK(back == g);
}

TEST_CASE("dataset finalize checks widths and labels") {
  Dataset ds;
  ds.name = "toy";
  ds.graphs.push_back(Graph::make(2, {{0, 1}}, {{1.0}, {1.0}}, 0));
  ds.graphs.push_back(Graph::make(2, {{0, 1}}, {{1.0}, {1.0}}, 2));
  ds.finalize();
  CHECK(ds.feature_width == 1);
  CHECK(ds.class_count == 3);

  Dataset bad = ds;
  bad.graphs.push_back(Graph::make(1, {}, {{1.0, 2.0}}, 0));
  CHECK_THROWS_AS(bad.finalize(), IngestError);

  Dataset unlabeled = ds;
  unlabeled.graphs.push_back(Graph::make(1, {}, {}, -1));
  CHECK_THROWS_AS(unlabeled.finalize(), IngestError);
}

TEST_CASE("dataset_hash tracks content") {
  Dataset a;
  a.name = "d";
  a.graphs.push_back(path3());
  a.graphs.back().graph_label = 0;
  a.finalize();
  Dataset b = a;
  CHECK(dataset_hash(a) == dataset_hash(b));
  b.graphs[0].node_features[0][0] = 2.0;
  CHECK(dataset_hash(a) != dataset_hash(b));
}

TEST_CASE("random_graph honors edge probability extremes and seeding") {
  Graph empty = random_graph(6, 0.0, 2, 1);
  CHECK(empty.edge_count() == 0);
  Graph full = random_graph(6, 1.0, 2, 1);
  CHECK(full.edge_count() == 15);
  CHECK(random_graph(8, 0.3, 3, 5) == random_graph(8, 0.3, 3, 5));
  CHECK(!(random_graph(8, 0.3, 3, 5) == random_graph(8, 0.3, 3, 6)));

  for (const auto& f : full.node_features) {
    int ones = 0;
    for (double x : f) {
      CHECK((x == 0.0 || x == 1.0));
      ones += x == 1.0;
    }
    CHECK(ones == 1);  // one-hot feature rows
    CHECK(f.size() == 2);
  }
}

TEST_CASE("random_graph edge count concentrates around n*(n-1)/2 * p") {
  // n=20, p=0.3: expected 57 edges; the 1000-seed mean should be within 5%.
  double total = 0.0;
  for (uint64_t s = 0; s < 1000; ++s) total += random_graph(20, 0.3, 2, s).edge_count();
  double mean = total / 1000.0;
  CHECK(mean > 57.0 * 0.95);
  CHECK(mean < 57.0 * 1.05);
}
