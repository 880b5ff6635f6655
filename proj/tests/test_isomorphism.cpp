#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlgnn/errors.hpp"
#include "tlgnn/graph.hpp"
#include "tlgnn/isomorphism.hpp"

#include <random>

using namespace tlgnn;

namespace {

Graph cycle(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::make(n, std::move(edges));
}

}  // namespace

TEST_CASE("a graph is isomorphic to any relabeling of itself") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    Graph g = random_graph(9, 0.35, 3, rng());
    std::vector<int> perm(9);
    for (int i = 0; i < 9; ++i) perm[i] = i;
    for (size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng() % i]);
    CHECK(is_isomorphic_small(g, relabel(g, perm)));
  }
}

TEST_CASE("C6 vs two triangles: WL-equivalent but not isomorphic") {
  Graph c3x2 = Graph::make(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
  CHECK(!is_isomorphic_small(cycle(6), c3x2));
}

TEST_CASE("size and edge-count mismatches are rejected") {
  CHECK(!is_isomorphic_small(cycle(4), cycle(5)));
  Graph p4 = Graph::make(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(!is_isomorphic_small(cycle(4), p4));
}

TEST_CASE("feature multisets must match") {
  Graph a = Graph::make(2, {{0, 1}}, {{1.0}, {2.0}});
  Graph b = Graph::make(2, {{0, 1}}, {{1.0}, {1.0}});
  CHECK(!is_isomorphic_small(a, b));
  Graph c = Graph::make(2, {{0, 1}}, {{2.0}, {1.0}});
  CHECK(is_isomorphic_small(a, c));
}

TEST_CASE("features constrain the mapping, not just the multiset") {
  // Same star, but the leaf colors attach differently relative to distance.
  Graph a = Graph::make(4, {{0, 1}, {1, 2}, {2, 3}}, {{1}, {2}, {1}, {2}});
  Graph b = Graph::make(4, {{0, 1}, {1, 2}, {2, 3}}, {{2}, {1}, {1}, {2}});
  CHECK(!is_isomorphic_small(a, b));
}

TEST_CASE("disconnected graphs are handled") {
  Graph a = Graph::make(4, {{0, 1}, {2, 3}});
  Graph b = Graph::make(4, {{0, 2}, {1, 3}});
  CHECK(is_isomorphic_small(a, b));
  Graph c = Graph::make(4, {{0, 1}, {1, 2}});
  CHECK(!is_isomorphic_small(a, c));
}

TEST_CASE("graphs above 16 nodes exceed the search budget") {
  Graph big = Graph::make(17, {});
  CHECK_THROWS_AS(is_isomorphic_small(big, big), BudgetError);
}

TEST_CASE("petersen-like non trivial positive pair") {
  // Two drawings of the 3-cube graph Q3.
  Graph q3 = Graph::make(8, {{0, 1}, {1, 2}, {2, 3}, {3, 0},
                             {4, 5}, {5, 6}, {6, 7}, {7, 4},
                             {0, 4}, {1, 5}, {2, 6}, {3, 7}});
  std::vector<int> perm = {3, 5, 0, 6, 2, 7, 1, 4};
  CHECK(is_isomorphic_small(q3, relabel(q3, perm)));
}
