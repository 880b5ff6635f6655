#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tlgnn {

// Undirected simple graph with per-node feature vectors and an optional label.
// Edges are stored once as (min, max) pairs, sorted; nodes are 0-based.
struct Graph {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<double>> node_features;  // node_count rows, uniform width
  int graph_label = -1;                            // -1 means absent

  int edge_count() const { return static_cast<int>(edges.size()); }
  int feature_width() const {
    return node_features.empty() ? 0 : static_cast<int>(node_features[0].size());
  }
  bool has_edge(int u, int v) const;
  int degree(int v) const;
  std::vector<std::vector<int>> adjacency_list() const;  // sorted neighbor lists

  // Validates, deduplicates and normalizes. Throws IngestError on self loops,
  // out-of-range endpoints or ragged feature rows. Missing features default to
  // width-1 all-ones rows.
  static Graph make(int node_count, std::vector<std::pair<int, int>> edges,
                    std::vector<std::vector<double>> node_features = {}, int graph_label = -1);
};

bool operator==(const Graph& a, const Graph& b);

// Relabels nodes: node v of `g` becomes perm[v]. perm must be a permutation.
Graph relabel(const Graph& g, const std::vector<int>& perm);

nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

// A labeled graph collection with a uniform feature width.
struct Dataset {
  std::string name;
  std::vector<Graph> graphs;
  int feature_width = 0;
  int class_count = 0;

  // Recomputes feature_width/class_count from the graphs; throws IngestError
  // if feature widths disagree or labels are missing/negative.
  void finalize();
};

// Content hash covering structure, features and labels; used as a cache key.
uint64_t dataset_hash(const Dataset& ds);

// Erdos-Renyi G(n, p) with node features drawn as one-hot labels from an
// alphabet of `feature_alphabet` symbols (width-1 all-ones if alphabet <= 1).
Graph random_graph(int n, double p, int feature_alphabet, uint64_t seed);

}  // namespace tlgnn
