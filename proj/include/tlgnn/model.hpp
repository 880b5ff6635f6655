#pragma once

#include "tlgnn/generated_graph.hpp"
#include "tlgnn/graph.hpp"
#include "tlgnn/nn.hpp"
#include "tlgnn/subgraph.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tlgnn {

enum class AggSubKind { Sum, Max };
enum class MergeKind { AttentionSum, Max };

struct TlgnnConfig {
  int layer_count = 3;
  int hidden = 32;
  int depth = 3;          // subgraph search depth D
  int tree_threshold = 3;
  AggSubKind agg_sub = AggSubKind::Sum;
  MergeKind merge = MergeKind::AttentionSum;
  bool subgraph_branch = true;  // false = node-level-only ablation
  bool type_one_hot = false;    // supernode type as one-hot instead of a code
  bool batch_norm = false;
  bool pool_merged = false;       // readout taps merged h instead of h-tilde
  bool readout_all_layers = true; // false = final layer only
  int epochs = 300;
  double lr = 1e-2;
  double lr_decay = 0.5;
  int lr_decay_every = 50;
  int batch_size = 32;
  uint64_t seed = 0;
  double early_stop_train_acc = -1.0;  // <= 0 disables early stopping
  int threads = 1;                     // fold-level parallelism in cross_validate

  // Named rows of the variant table: tlgnn, tlgnn_sm, tlgnn_ms, tlgnn_mm,
  // node-only. Other names throw ConfigError.
  static TlgnnConfig variant(const std::string& name);
  void validate() const;
};

nlohmann::json config_to_json(const TlgnnConfig& c);
TlgnnConfig config_from_json(const nlohmann::json& j);

// Per-graph precomputed inputs: subgraph records at the config's depth and
// threshold, the generated graph, and the dense input features.
struct GraphInputs {
  Graph graph;
  std::vector<std::vector<int>> self_and_neighbors;  // per node, {v} + N(v)
  GeneratedGraph generated;
  TransformMatrix transform;
  std::vector<std::vector<int>> super_self_and_neighbors;
  Matrix x0;      // N x feature_width
  Matrix s0_raw;  // M x supernode feature width
  int label = -1;
};

GraphInputs build_graph_inputs(const Graph& g, const TlgnnConfig& config);
// Optionally reuses precomputed records (e.g. from the enumeration cache).
GraphInputs build_graph_inputs(const Graph& g, const TlgnnConfig& config,
                               const std::vector<SubgraphRecord>& records);

struct ModelData {
  std::vector<GraphInputs> inputs;
  int feature_width = 0;
  int class_count = 0;
};
ModelData prepare_inputs(const Dataset& ds, const TlgnnConfig& config);

struct TlgnnParameters {
  int feature_width = 0;
  int class_count = 0;
  int hidden = 0;
  int layer_count = 0;
  int supernode_feature_width = 0;
  bool batch_norm = false;
  bool readout_all_layers = true;

  Matrix embed_w, embed_b, grad_embed_w, grad_embed_b;  // supernode embedding
  struct Layer {
    DenseMlp node_mlp;
    DenseMlp sub_mlp;
    Matrix att, grad_att;  // 1x2: raw alpha-hat, beta-hat
  };
  std::vector<Layer> layers;
  std::vector<Matrix> readout_w, readout_b, grad_readout_w, grad_readout_b;

  static TlgnnParameters init(const TlgnnConfig& config, int feature_width, int class_count,
                              uint64_t seed);
  std::vector<TensorRef> tensors();  // stable order: embed, layers, readout
  void zero_grads();
};

// Activation bundle kept for the backward pass.
struct ForwardCache {
  Matrix s0;
  struct LayerCache {
    Matrix agg_node;
    MlpCache node_cache;
    Matrix h_tilde;
    Matrix agg_sub;
    MlpCache sub_cache;
    Matrix s_out;
    Matrix h_sub;                    // H_S
    std::vector<int> sub_argmax;     // winners for the max AGG_SUB, N*d
    double alpha = 1.0, beta = 0.0;
    std::vector<char> merge_from_sub;  // winners for the max merge, N*d
    Matrix h_merged;
  };
  std::vector<LayerCache> layers;
  std::vector<Matrix> pooled;  // one 1xW row per readout tap
};

struct ForwardResult {
  Matrix logits;  // 1 x class_count
  std::vector<std::pair<double, double>> attention;  // (alpha, beta) per layer
  Matrix node_embeddings;  // final merged node matrix
};

ForwardResult model_forward(const GraphInputs& in, const TlgnnParameters& params,
                            const TlgnnConfig& config, ForwardCache* cache = nullptr,
                            bool training = false);

// Accumulates parameter gradients for one graph given d(loss)/d(logits).
void model_backward(const GraphInputs& in, TlgnnParameters& params, const TlgnnConfig& config,
                    const ForwardCache& cache, const Matrix& grad_logits);

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;
  // Accuracy over the epoch's own training forwards (batch-norm batch
  // statistics when enabled), not a separate eval pass.
  double train_accuracy = 0.0;
};

struct TrainResult {
  TlgnnParameters params;
  std::vector<EpochStats> curve;
  int epochs_run = 0;
};

// Called after every optimizer step (attention identity checks, inspection).
using StepCallback = std::function<void(const TlgnnParameters&, int step)>;

TrainResult train_model(const ModelData& data, const std::vector<int>& train_indices,
                        const TlgnnConfig& config, const StepCallback& on_step = {});

struct EvalResult {
  double loss = 0.0;
  double accuracy = 0.0;
  std::vector<int> predictions;
};
EvalResult evaluate_model(const ModelData& data, const std::vector<int>& indices,
                          const TlgnnParameters& params, const TlgnnConfig& config);

struct FoldResult {
  int fold = 0;
  double test_accuracy = 0.0;
  double test_loss = 0.0;
  int epochs_run = 0;
  std::vector<EpochStats> curve;
};

struct CvResult {
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  double stddev_accuracy = 0.0;
};

// Stratified seeded folds; every graph lands in exactly one test fold. Folds
// train independently (parallel when config.threads > 1), each from its own
// derived seed stream.
CvResult cross_validate(const ModelData& data, const TlgnnConfig& config, int folds);

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, uint64_t seed);

// Per-layer (alpha, beta) pairs and their CSV rendering.
std::vector<std::pair<double, double>> attention_report(const TlgnnParameters& params);
std::string attention_csv(const TlgnnParameters& params);

std::string metrics_csv(const CvResult& cv);
std::string metrics_csv(const TrainResult& tr);

// Checkpoint round-trip (versioned JSON with named tensors and shapes).
nlohmann::json checkpoint_to_json(const TlgnnParameters& params, const TlgnnConfig& config);
std::pair<TlgnnParameters, TlgnnConfig> checkpoint_from_json(const nlohmann::json& j);

// Logit embedding for separation scoring: enumerates, builds and runs one
// graph through the model with frozen parameters.
std::function<std::vector<double>(const Graph&)> make_logit_embedding(
    const TlgnnParameters& params, const TlgnnConfig& config);

}  // namespace tlgnn
