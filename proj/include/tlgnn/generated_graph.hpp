#pragma once

#include "tlgnn/graph.hpp"
#include "tlgnn/matrix.hpp"
#include "tlgnn/subgraph.hpp"

namespace tlgnn {

// One supernode per subgraph record; supernodes are adjacent when their
// records share at least one host node. Feature layout per supernode:
//   default:      [node_count, type_code]  with tree=0, path=1, circuit=2
//   type one-hot: [node_count, tree?, path?, circuit?]
struct GeneratedGraph {
  int supernode_count = 0;
  std::vector<std::pair<int, int>> super_edges;  // (min, max), sorted, unique
  std::vector<std::vector<double>> super_features;
  std::vector<SubgraphRecord> source_records;

  int feature_width() const {
    return super_features.empty() ? 0 : static_cast<int>(super_features[0].size());
  }
  std::vector<std::vector<int>> adjacency_list() const;
};

// Sparse host-node x supernode incidence: membership[v] lists the supernodes
// whose record contains v, ascending.
struct TransformMatrix {
  int node_count = 0;
  int supernode_count = 0;
  std::vector<std::vector<int>> membership;

  Matrix dense() const;  // node_count x supernode_count 0/1 matrix
};

struct GeneratedGraphOptions {
  bool type_one_hot = false;
};

std::pair<GeneratedGraph, TransformMatrix> build_generated_graph(
    const Graph& g, const std::vector<SubgraphRecord>& records,
    const GeneratedGraphOptions& options = {});

// out[v] = sum over membership[v] of h rows, ascending supernode index.
// Bitwise equal to matmul(t.dense(), h). The model's own aggregation sums in
// canonical row order instead; see TlgnnModel.
Matrix transform_aggregate(const TransformMatrix& t, const Matrix& h);

// Elementwise-max variant; rows with empty membership stay zero.
Matrix transform_aggregate_max(const TransformMatrix& t, const Matrix& h);

nlohmann::json generated_graph_to_json(const GeneratedGraph& gg, const TransformMatrix& t);

}  // namespace tlgnn
