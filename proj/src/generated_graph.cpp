#include "tlgnn/generated_graph.hpp"

#include "tlgnn/errors.hpp"

#include <algorithm>
#include <set>

namespace tlgnn {

std::vector<std::vector<int>> GeneratedGraph::adjacency_list() const {
  std::vector<std::vector<int>> adj(supernode_count);
  for (const auto& e : super_edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

Matrix TransformMatrix::dense() const {
  Matrix t(node_count, supernode_count);
  for (int v = 0; v < node_count; ++v)
    for (int j : membership[v]) t(v, j) = 1.0;
  return t;
}

std::pair<GeneratedGraph, TransformMatrix> build_generated_graph(
    const Graph& g, const std::vector<SubgraphRecord>& records,
    const GeneratedGraphOptions& options) {
  GeneratedGraph gg;
  TransformMatrix t;
  gg.supernode_count = static_cast<int>(records.size());
  gg.source_records = records;
  t.node_count = g.node_count;
  t.supernode_count = gg.supernode_count;
  t.membership.assign(g.node_count, {});

  for (int j = 0; j < gg.supernode_count; ++j) {
    const auto& rec = records[j];
    std::vector<double> feat;
    double count = static_cast<double>(rec.nodes.size());
    if (options.type_one_hot) {
      feat = {count, 0.0, 0.0, 0.0};
      feat[1 + static_cast<int>(rec.kind)] = 1.0;
    } else {
      feat = {count, static_cast<double>(rec.kind)};
    }
    gg.super_features.push_back(std::move(feat));
    for (int v : rec.nodes) {
      if (v < 0 || v >= g.node_count)
        throw IngestError("generated graph: record node out of range");
      t.membership[v].push_back(j);  // j ascending, so lists stay sorted
    }
  }

  // Supernodes sharing any host node are adjacent.
  std::set<std::pair<int, int>> edges;
  for (int v = 0; v < g.node_count; ++v) {
    const auto& members = t.membership[v];
    for (size_t x = 0; x < members.size(); ++x)
      for (size_t y = x + 1; y < members.size(); ++y)
        edges.emplace(members[x], members[y]);
  }
  gg.super_edges.assign(edges.begin(), edges.end());
  return {std::move(gg), std::move(t)};
}

Matrix transform_aggregate(const TransformMatrix& t, const Matrix& h) {
  if (h.rows() != t.supernode_count)
    throw ConfigError("transform_aggregate: row count does not match supernode count");
  Matrix out(t.node_count, h.cols());
  for (int v = 0; v < t.node_count; ++v) {
    double* orow = out.row(v);
    for (int j : t.membership[v]) {
      const double* srow = h.row(j);
      for (int c = 0; c < h.cols(); ++c) orow[c] += srow[c];
    }
  }
  return out;
}

Matrix transform_aggregate_max(const TransformMatrix& t, const Matrix& h) {
  if (h.rows() != t.supernode_count)
    throw ConfigError("transform_aggregate_max: row count does not match supernode count");
  Matrix out(t.node_count, h.cols());
  for (int v = 0; v < t.node_count; ++v) row_max(h, t.membership[v], out.row(v));
  return out;
}

nlohmann::json generated_graph_to_json(const GeneratedGraph& gg, const TransformMatrix& t) {
  nlohmann::json j;
  j["m"] = gg.supernode_count;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : gg.super_edges) j["edges"].push_back({e.first, e.second});
  j["features"] = gg.super_features;
  j["records"] = nlohmann::json::array();
  for (const auto& r : gg.source_records) j["records"].push_back(record_to_json(r));
  j["transform"] = {{"n", t.node_count}, {"m", t.supernode_count}, {"membership", t.membership}};
  return j;
}

}  // namespace tlgnn
