#include "tlgnn/graph.hpp"

#include "tlgnn/errors.hpp"
#include "tlgnn/util.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace tlgnn {

bool Graph::has_edge(int u, int v) const {
  if (u == v) return false;
  auto e = std::minmax(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(e.first, e.second));
}

int Graph::degree(int v) const {
  int d = 0;
  for (const auto& e : edges) d += (e.first == v) + (e.second == v);
  return d;
}

std::vector<std::vector<int>> Graph::adjacency_list() const {
  std::vector<std::vector<int>> adj(node_count);
  for (const auto& e : edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

Graph Graph::make(int node_count, std::vector<std::pair<int, int>> edges,
                  std::vector<std::vector<double>> node_features, int graph_label) {
  if (node_count < 0) throw IngestError("graph: negative node count");
  for (auto& e : edges) {
    if (e.first == e.second)
      throw IngestError("graph: self loop at node " + std::to_string(e.first));
    if (e.first < 0 || e.second < 0 || e.first >= node_count || e.second >= node_count)
      throw IngestError("graph: edge endpoint out of range");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  if (node_features.empty()) {
    node_features.assign(node_count, std::vector<double>{1.0});
  } else {
    if (static_cast<int>(node_features.size()) != node_count)
      throw IngestError("graph: feature row count does not match node count");
    size_t width = node_features[0].size();
    for (const auto& row : node_features)
      if (row.size() != width) throw IngestError("graph: ragged feature rows");
  }

  Graph g;
  g.node_count = node_count;
  g.edges = std::move(edges);
  g.node_features = std::move(node_features);
  g.graph_label = graph_label;
  return g;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.node_count == b.node_count && a.edges == b.edges &&
         a.node_features == b.node_features && a.graph_label == b.graph_label;
}

Graph relabel(const Graph& g, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != g.node_count)
    throw ConfigError("relabel: permutation size mismatch");
  std::vector<int> seen(g.node_count, 0);
  for (int p : perm) {
    if (p < 0 || p >= g.node_count || seen[p]++) throw ConfigError("relabel: not a permutation");
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(g.edges.size());
  for (const auto& e : g.edges) edges.emplace_back(perm[e.first], perm[e.second]);
  std::vector<std::vector<double>> feats(g.node_count);
  for (int v = 0; v < g.node_count; ++v) feats[perm[v]] = g.node_features[v];
  return Graph::make(g.node_count, std::move(edges), std::move(feats), g.graph_label);
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json j;
  j["n"] = g.node_count;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges) j["edges"].push_back({e.first, e.second});
  j["features"] = g.node_features;
  if (g.graph_label >= 0) j["label"] = g.graph_label;
  return j;
}

Graph graph_from_json(const nlohmann::json& j) {
  try {
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw IngestError("graph json: malformed edge");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    std::vector<std::vector<double>> feats;
    if (j.contains("features")) feats = j["features"].get<std::vector<std::vector<double>>>();
    int label = j.value("label", -1);
    return Graph::make(n, std::move(edges), std::move(feats), label);
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(std::string("graph json: ") + e.what());
  }
}

void Dataset::finalize() {
  feature_width = 0;
  class_count = 0;
  if (graphs.empty()) return;
  feature_width = graphs[0].feature_width();
  int max_label = -1;
  for (const auto& g : graphs) {
    if (g.feature_width() != feature_width)
      throw IngestError("dataset: inconsistent feature widths");
    if (g.graph_label < 0) throw IngestError("dataset: graph without label");
    max_label = std::max(max_label, g.graph_label);
  }
  class_count = max_label + 1;
}

uint64_t dataset_hash(const Dataset& ds) {
  uint64_t h = fnv1a64(ds.name);
  for (const auto& g : ds.graphs) {
    // dump() is deterministic (sorted keys, shortest round-trip doubles)
    h = fnv1a64(graph_to_json(g).dump(), h);
  }
  return h;
}

Graph random_graph(int n, double p, int feature_alphabet, uint64_t seed) {
  if (n < 0 || p < 0.0 || p > 1.0) throw ConfigError("random_graph: invalid n or p");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> feats(n);
  if (feature_alphabet <= 1) {
    for (auto& row : feats) row = {1.0};
  } else {
    for (auto& row : feats) {
      row.assign(feature_alphabet, 0.0);
      row[rand_below(rng, feature_alphabet)] = 1.0;
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rand_unit(rng) < p) edges.emplace_back(i, j);
  return Graph::make(n, std::move(edges), std::move(feats));
}

}  // namespace tlgnn
