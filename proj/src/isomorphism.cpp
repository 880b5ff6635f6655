#include "tlgnn/isomorphism.hpp"

#include "tlgnn/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <vector>

namespace tlgnn {

namespace {

constexpr int kMaxNodes = 16;

std::vector<uint32_t> adjacency_masks(const Graph& g) {
  std::vector<uint32_t> adj(g.node_count, 0);
  for (const auto& e : g.edges) {
    adj[e.first] |= 1u << e.second;
    adj[e.second] |= 1u << e.first;
  }
  return adj;
}

// Feature rows keyed by exact bytes; equal ids mean equal vectors.
std::vector<int> feature_keys(const Graph& a, const Graph& b) {
  std::map<std::string, int> ids;
  std::vector<int> keys;
  for (const Graph* g : {&a, &b}) {
    for (const auto& row : g->node_features) {
      std::string k(reinterpret_cast<const char*>(row.data()), row.size() * sizeof(double));
      auto [it, ins] = ids.emplace(k, static_cast<int>(ids.size()));
      keys.push_back(it->second);
    }
  }
  return keys;
}

struct Searcher {
  int n;
  const std::vector<uint32_t>& adj1;
  const std::vector<uint32_t>& adj2;
  const std::vector<int>& key1;  // feature key per node of a
  const std::vector<int>& key2;  // feature key per node of b
  std::vector<int> order;        // mapping order over a's nodes
  std::vector<int> map;          // a-node -> b-node, -1 if unmapped
  uint32_t used = 0;             // b-nodes already taken

  bool search(int depth) {
    if (depth == n) return true;
    int v = order[depth];
    // Image of v's already-mapped neighborhood.
    uint32_t want = 0;
    for (int w = 0; w < n; ++w)
      if (map[w] >= 0 && (adj1[v] >> w & 1u)) want |= 1u << map[w];
    uint32_t mapped_image = 0;
    for (int w = 0; w < n; ++w)
      if (map[w] >= 0) mapped_image |= 1u << map[w];
    for (int u = 0; u < n; ++u) {
      if (used >> u & 1u) continue;
      if (key2[u] != key1[v]) continue;
      if (std::popcount(adj2[u]) != std::popcount(adj1[v])) continue;
      if ((adj2[u] & mapped_image) != want) continue;
      map[v] = u;
      used |= 1u << u;
      if (search(depth + 1)) return true;
      used &= ~(1u << u);
      map[v] = -1;
    }
    return false;
  }
};

// BFS order from the highest-degree node of each component keeps most newly
// mapped nodes adjacent to an already-mapped one, which prunes hard.
std::vector<int> bfs_order(int n, const std::vector<uint32_t>& adj) {
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  while (static_cast<int>(order.size()) < n) {
    int start = -1;
    for (int v = 0; v < n; ++v)
      if (!seen[v] && (start < 0 || std::popcount(adj[v]) > std::popcount(adj[start]))) start = v;
    std::vector<int> queue{start};
    seen[start] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      order.push_back(v);
      for (int u = 0; u < n; ++u)
        if ((adj[v] >> u & 1u) && !seen[u]) {
          seen[u] = 1;
          queue.push_back(u);
        }
    }
  }
  return order;
}

}  // namespace

bool is_isomorphic_small(const Graph& a, const Graph& b) {
  if (a.node_count > kMaxNodes || b.node_count > kMaxNodes)
    throw BudgetError("is_isomorphic_small: graph exceeds 16 nodes");
  if (a.node_count != b.node_count || a.edge_count() != b.edge_count()) return false;
  int n = a.node_count;
  if (n == 0) return true;

  auto keys = feature_keys(a, b);
  std::vector<int> key1(keys.begin(), keys.begin() + n);
  std::vector<int> key2(keys.begin() + n, keys.end());
  {
    auto s1 = key1, s2 = key2;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 != s2) return false;
  }

  auto adj1 = adjacency_masks(a);
  auto adj2 = adjacency_masks(b);
  Searcher s{n, adj1, adj2, key1, key2, bfs_order(n, adj1), std::vector<int>(n, -1)};
  return s.search(0);
}

}  // namespace tlgnn
