#include "tlgnn/model.hpp"

#include "tlgnn/errors.hpp"
#include "tlgnn/util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

namespace tlgnn {

TlgnnConfig TlgnnConfig::variant(const std::string& name) {
  TlgnnConfig c;
  if (name == "tlgnn") {
  } else if (name == "tlgnn_sm") {
    c.merge = MergeKind::Max;
  } else if (name == "tlgnn_ms") {
    c.agg_sub = AggSubKind::Max;
  } else if (name == "tlgnn_mm") {
    c.agg_sub = AggSubKind::Max;
    c.merge = MergeKind::Max;
  } else if (name == "node-only") {
    c.subgraph_branch = false;
  } else {
    throw ConfigError("unknown variant '" + name + "'");
  }
  return c;
}

void TlgnnConfig::validate() const {
  if (layer_count < 1) throw ConfigError("config: layer_count must be >= 1");
  if (hidden < 1) throw ConfigError("config: hidden must be >= 1");
  if (depth < 0 || depth > 14) throw ConfigError("config: depth must be in [0, 14]");
  if (tree_threshold < 1) throw ConfigError("config: tree_threshold must be >= 1");
  if (epochs < 1) throw ConfigError("config: epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
  if (!(lr > 0.0)) throw ConfigError("config: lr must be positive");
  if (!(lr_decay > 0.0)) throw ConfigError("config: lr_decay must be positive");
  if (lr_decay_every < 1) throw ConfigError("config: lr_decay_every must be >= 1");
  if (threads < 1) throw ConfigError("config: threads must be >= 1");
}

nlohmann::json config_to_json(const TlgnnConfig& c) {
  return {{"layer_count", c.layer_count},
          {"hidden", c.hidden},
          {"depth", c.depth},
          {"tree_threshold", c.tree_threshold},
          {"agg_sub", c.agg_sub == AggSubKind::Sum ? "sum" : "max"},
          {"merge", c.merge == MergeKind::AttentionSum ? "attention_sum" : "max"},
          {"subgraph_branch", c.subgraph_branch},
          {"type_one_hot", c.type_one_hot},
          {"batch_norm", c.batch_norm},
          {"pool_merged", c.pool_merged},
          {"readout_all_layers", c.readout_all_layers},
          {"epochs", c.epochs},
          {"lr", c.lr},
          {"lr_decay", c.lr_decay},
          {"lr_decay_every", c.lr_decay_every},
          {"batch_size", c.batch_size},
          {"seed", c.seed},
          {"early_stop_train_acc", c.early_stop_train_acc},
          {"threads", c.threads}};
}

TlgnnConfig config_from_json(const nlohmann::json& j) {
  TlgnnConfig c;
  try {
    c.layer_count = j.value("layer_count", c.layer_count);
    c.hidden = j.value("hidden", c.hidden);
    c.depth = j.value("depth", c.depth);
    c.tree_threshold = j.value("tree_threshold", c.tree_threshold);
    std::string agg = j.value("agg_sub", "sum");
    std::string merge = j.value("merge", "attention_sum");
    if (agg != "sum" && agg != "max") throw ConfigError("config: bad agg_sub '" + agg + "'");
    if (merge != "attention_sum" && merge != "max")
      throw ConfigError("config: bad merge '" + merge + "'");
    c.agg_sub = agg == "sum" ? AggSubKind::Sum : AggSubKind::Max;
    c.merge = merge == "attention_sum" ? MergeKind::AttentionSum : MergeKind::Max;
    c.subgraph_branch = j.value("subgraph_branch", c.subgraph_branch);
    c.type_one_hot = j.value("type_one_hot", c.type_one_hot);
    c.batch_norm = j.value("batch_norm", c.batch_norm);
    c.pool_merged = j.value("pool_merged", c.pool_merged);
    c.readout_all_layers = j.value("readout_all_layers", c.readout_all_layers);
    c.epochs = j.value("epochs", c.epochs);
    c.lr = j.value("lr", c.lr);
    c.lr_decay = j.value("lr_decay", c.lr_decay);
    c.lr_decay_every = j.value("lr_decay_every", c.lr_decay_every);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.seed = j.value("seed", c.seed);
    c.early_stop_train_acc = j.value("early_stop_train_acc", c.early_stop_train_acc);
    c.threads = j.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {

std::vector<std::vector<int>> with_self(const std::vector<std::vector<int>>& adj) {
  std::vector<std::vector<int>> out(adj.size());
  for (size_t v = 0; v < adj.size(); ++v) {
    out[v].reserve(adj[v].size() + 1);
    out[v].push_back(static_cast<int>(v));
    out[v].insert(out[v].end(), adj[v].begin(), adj[v].end());
  }
  return out;
}

}  // namespace

GraphInputs build_graph_inputs(const Graph& g, const TlgnnConfig& config,
                               const std::vector<SubgraphRecord>& records) {
  GraphInputs in;
  in.graph = g;
  in.label = g.graph_label;
  in.self_and_neighbors = with_self(g.adjacency_list());

  GeneratedGraphOptions ggo;
  ggo.type_one_hot = config.type_one_hot;
  auto [gg, t] = build_generated_graph(g, records, ggo);
  in.generated = std::move(gg);
  in.transform = std::move(t);
  in.super_self_and_neighbors = with_self(in.generated.adjacency_list());

  int f = g.feature_width();
  in.x0 = Matrix(g.node_count, f);
  for (int v = 0; v < g.node_count; ++v)
    for (int c = 0; c < f; ++c) in.x0(v, c) = g.node_features[v][c];

  int m = in.generated.supernode_count;
  int sf = in.generated.feature_width();
  if (m == 0) sf = config.type_one_hot ? 4 : 2;
  in.s0_raw = Matrix(m, sf);
  for (int j = 0; j < m; ++j)
    for (int c = 0; c < sf; ++c) in.s0_raw(j, c) = in.generated.super_features[j][c];
  return in;
}

GraphInputs build_graph_inputs(const Graph& g, const TlgnnConfig& config) {
  auto result = enumerate_subgraphs(g, config.depth, config.tree_threshold);
  return build_graph_inputs(g, config, result.records);
}

ModelData prepare_inputs(const Dataset& ds, const TlgnnConfig& config) {
  ModelData data;
  data.feature_width = ds.feature_width;
  data.class_count = ds.class_count;
  data.inputs.reserve(ds.graphs.size());
  for (const auto& g : ds.graphs) data.inputs.push_back(build_graph_inputs(g, config));
  return data;
}

TlgnnParameters TlgnnParameters::init(const TlgnnConfig& config, int feature_width,
                                      int class_count, uint64_t seed) {
  config.validate();
  if (feature_width < 1 || class_count < 1)
    throw ConfigError("params: need feature_width >= 1 and class_count >= 1");
  TlgnnParameters p;
  p.feature_width = feature_width;
  p.class_count = class_count;
  p.hidden = config.hidden;
  p.layer_count = config.layer_count;
  p.supernode_feature_width = config.type_one_hot ? 4 : 2;
  p.batch_norm = config.batch_norm;
  p.readout_all_layers = config.readout_all_layers;

  int d = config.hidden;
  p.embed_w = Matrix(p.supernode_feature_width, d);
  glorot_init(p.embed_w, seed_for(seed, "embed_w"));
  p.embed_b = Matrix(1, d);
  p.grad_embed_w = Matrix(p.supernode_feature_width, d);
  p.grad_embed_b = Matrix(1, d);

  for (int k = 0; k < config.layer_count; ++k) {
    Layer layer;
    int din = k == 0 ? feature_width : d;
    layer.node_mlp = DenseMlp::make({din, d, d}, config.batch_norm,
                                    seed_for(seed, "node" + std::to_string(k)));
    layer.sub_mlp = DenseMlp::make({d, d, d}, config.batch_norm,
                                   seed_for(seed, "sub" + std::to_string(k)));
    layer.att = Matrix(1, 2);
    uniform_init(layer.att, 0.1, seed_for(seed, "att" + std::to_string(k)));
    layer.grad_att = Matrix(1, 2);
    p.layers.push_back(std::move(layer));
  }

  std::vector<int> tap_widths;
  if (config.readout_all_layers) {
    tap_widths.push_back(feature_width);
    for (int k = 0; k < config.layer_count; ++k) tap_widths.push_back(d);
  } else {
    tap_widths.push_back(d);
  }
  for (size_t t = 0; t < tap_widths.size(); ++t) {
    Matrix w(tap_widths[t], class_count);
    glorot_init(w, seed_for(seed, "readout" + std::to_string(t)));
    p.readout_w.push_back(std::move(w));
    p.readout_b.emplace_back(1, class_count);
    p.grad_readout_w.emplace_back(tap_widths[t], class_count);
    p.grad_readout_b.emplace_back(1, class_count);
  }
  return p;
}

std::vector<TensorRef> TlgnnParameters::tensors() {
  std::vector<TensorRef> out;
  out.push_back({"embed.w", &embed_w, &grad_embed_w});
  out.push_back({"embed.b", &embed_b, &grad_embed_b});
  for (size_t k = 0; k < layers.size(); ++k) {
    std::string p = "layer" + std::to_string(k);
    layers[k].node_mlp.collect(p + ".node", out);
    layers[k].sub_mlp.collect(p + ".sub", out);
    out.push_back({p + ".att", &layers[k].att, &layers[k].grad_att});
  }
  for (size_t t = 0; t < readout_w.size(); ++t) {
    std::string p = "readout" + std::to_string(t);
    out.push_back({p + ".w", &readout_w[t], &grad_readout_w[t]});
    out.push_back({p + ".b", &readout_b[t], &grad_readout_b[t]});
  }
  return out;
}

void TlgnnParameters::zero_grads() {
  grad_embed_w.fill(0.0);
  grad_embed_b.fill(0.0);
  for (auto& layer : layers) {
    layer.node_mlp.zero_grads();
    layer.sub_mlp.zero_grads();
    layer.grad_att.fill(0.0);
  }
  for (auto& g : grad_readout_w) g.fill(0.0);
  for (auto& g : grad_readout_b) g.fill(0.0);
}

namespace {

std::vector<int> all_rows(int n) {
  std::vector<int> rows(n);
  for (int i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

Matrix pool_rows(const Matrix& h) {
  Matrix out(1, h.cols());
  canonical_row_sum(h, all_rows(h.rows()), out.row(0));
  return out;
}

// Readout tap index for layer k (0-based), or -1 when the layer is untapped.
int tap_of_layer(const TlgnnParameters& p, int k) {
  if (p.readout_all_layers) return k + 1;
  return k == p.layer_count - 1 ? 0 : -1;
}

}  // namespace

ForwardResult model_forward(const GraphInputs& in, const TlgnnParameters& params,
                            const TlgnnConfig& config, ForwardCache* cache, bool training) {
  if (in.x0.cols() != params.feature_width)
    throw ConfigError("forward: graph feature width does not match parameters");
  if (config.layer_count != params.layer_count || config.hidden != params.hidden)
    throw ConfigError("forward: config does not match parameters");
  ForwardCache local;
  ForwardCache& cc = cache ? *cache : local;

  const int n = in.graph.node_count;
  const int m = in.transform.supernode_count;
  const int d = params.hidden;
  const bool use_sub = config.subgraph_branch && m > 0;

  cc.layers.assign(params.layer_count, {});
  cc.pooled.assign(params.readout_w.size(), {});

  Matrix h = in.x0;
  Matrix s;
  if (use_sub) {
    if (in.s0_raw.cols() != params.supernode_feature_width)
      throw ConfigError("forward: supernode feature width does not match parameters");
    s = matmul(in.s0_raw, params.embed_w);
    for (int j = 0; j < m; ++j)
      for (int c = 0; c < d; ++c) s(j, c) += params.embed_b(0, c);
    cc.s0 = s;
  }

  if (params.readout_all_layers) cc.pooled[0] = pool_rows(h);

  ForwardResult result;
  for (int k = 0; k < params.layer_count; ++k) {
    auto& lc = cc.layers[k];
    const auto& layer = params.layers[k];

    lc.agg_node = Matrix(n, h.cols());
    for (int v = 0; v < n; ++v)
      canonical_row_sum(h, in.self_and_neighbors[v], lc.agg_node.row(v));
    lc.h_tilde = layer.node_mlp.forward(lc.agg_node, lc.node_cache, training);

    lc.h_sub = Matrix(n, d);
    if (use_sub) {
      lc.agg_sub = Matrix(m, d);
      for (int j = 0; j < m; ++j)
        canonical_row_sum(s, in.super_self_and_neighbors[j], lc.agg_sub.row(j));
      lc.s_out = layer.sub_mlp.forward(lc.agg_sub, lc.sub_cache, training);
      if (config.agg_sub == AggSubKind::Sum) {
        for (int v = 0; v < n; ++v)
          canonical_row_sum(lc.s_out, in.transform.membership[v], lc.h_sub.row(v));
      } else {
        lc.sub_argmax.assign(static_cast<size_t>(n) * d, -1);
        for (int v = 0; v < n; ++v)
          row_max_with_argmax(lc.s_out, in.transform.membership[v], lc.h_sub.row(v),
                              lc.sub_argmax.data() + static_cast<size_t>(v) * d);
      }
    }

    auto [alpha, beta] = attention_weights(layer.att(0, 0), layer.att(0, 1));
    lc.alpha = alpha;
    lc.beta = beta;
    result.attention.emplace_back(alpha, beta);

    lc.h_merged = Matrix(n, d);
    if (config.merge == MergeKind::AttentionSum) {
      for (int v = 0; v < n; ++v)
        for (int c = 0; c < d; ++c)
          lc.h_merged(v, c) = alpha * lc.h_tilde(v, c) + beta * lc.h_sub(v, c);
    } else {
      lc.merge_from_sub.assign(static_cast<size_t>(n) * d, 0);
      for (int v = 0; v < n; ++v)
        for (int c = 0; c < d; ++c) {
          bool from_sub = lc.h_sub(v, c) > lc.h_tilde(v, c);
          lc.merge_from_sub[static_cast<size_t>(v) * d + c] = from_sub ? 1 : 0;
          lc.h_merged(v, c) = from_sub ? lc.h_sub(v, c) : lc.h_tilde(v, c);
        }
    }

    int tap = tap_of_layer(params, k);
    if (tap >= 0) cc.pooled[tap] = pool_rows(config.pool_merged ? lc.h_merged : lc.h_tilde);

    h = lc.h_merged;
    if (use_sub) s = lc.s_out;
  }

  result.logits = Matrix(1, params.class_count);
  for (size_t t = 0; t < params.readout_w.size(); ++t) {
    Matrix part = matmul(cc.pooled[t], params.readout_w[t]);
    for (int c = 0; c < params.class_count; ++c)
      result.logits(0, c) += part(0, c) + params.readout_b[t](0, c);
  }
  result.node_embeddings = std::move(h);
  return result;
}

void model_backward(const GraphInputs& in, TlgnnParameters& params, const TlgnnConfig& config,
                    const ForwardCache& cache, const Matrix& grad_logits) {
  const int n = in.graph.node_count;
  const int m = in.transform.supernode_count;
  const int d = params.hidden;
  const bool use_sub = config.subgraph_branch && m > 0;
  if (grad_logits.rows() != 1 || grad_logits.cols() != params.class_count)
    throw ConfigError("backward: grad_logits shape mismatch");

  // Readout classifiers.
  std::vector<Matrix> dpooled(params.readout_w.size());
  for (size_t t = 0; t < params.readout_w.size(); ++t) {
    add_inplace(params.grad_readout_w[t], matmul(transpose(cache.pooled[t]), grad_logits));
    add_inplace(params.grad_readout_b[t], grad_logits);
    dpooled[t] = matmul(grad_logits, transpose(params.readout_w[t]));
  }

  Matrix dh_next(n, d);
  Matrix ds_next(m, d);
  for (int k = params.layer_count - 1; k >= 0; --k) {
    const auto& lc = cache.layers[k];
    auto& layer = params.layers[k];

    Matrix dh_merged = std::move(dh_next);
    Matrix dh_tilde(n, d);
    int tap = tap_of_layer(params, k);
    if (tap >= 0) {
      // Sum-pooling broadcasts the pooled gradient to every node row.
      Matrix& target = config.pool_merged ? dh_merged : dh_tilde;
      for (int v = 0; v < n; ++v)
        for (int c = 0; c < d; ++c) target(v, c) += dpooled[tap](0, c);
    }

    Matrix dh_sub(n, d);
    if (config.merge == MergeKind::AttentionSum) {
      double alpha = lc.alpha, beta = lc.beta;
      double dalpha = 0.0, dbeta = 0.0;
      for (int v = 0; v < n; ++v)
        for (int c = 0; c < d; ++c) {
          double gm = dh_merged(v, c);
          dh_tilde(v, c) += alpha * gm;
          dh_sub(v, c) = beta * gm;
          dalpha += gm * lc.h_tilde(v, c);
          dbeta += gm * lc.h_sub(v, c);
        }
      // Softmax pair backward: d(alpha)/d(alpha_hat) = alpha*beta, etc.
      layer.grad_att(0, 0) += alpha * beta * (dalpha - dbeta);
      layer.grad_att(0, 1) += alpha * beta * (dbeta - dalpha);
    } else {
      for (int v = 0; v < n; ++v)
        for (int c = 0; c < d; ++c) {
          if (lc.merge_from_sub[static_cast<size_t>(v) * d + c])
            dh_sub(v, c) += dh_merged(v, c);
          else
            dh_tilde(v, c) += dh_merged(v, c);
        }
    }

    Matrix ds_prev;
    if (use_sub) {
      Matrix ds_out = std::move(ds_next);
      if (config.agg_sub == AggSubKind::Sum) {
        for (int v = 0; v < n; ++v)
          for (int j : in.transform.membership[v])
            for (int c = 0; c < d; ++c) ds_out(j, c) += dh_sub(v, c);
      } else {
        for (int v = 0; v < n; ++v)
          for (int c = 0; c < d; ++c) {
            int j = lc.sub_argmax[static_cast<size_t>(v) * d + c];
            if (j >= 0) ds_out(j, c) += dh_sub(v, c);
          }
      }
      Matrix dagg_sub = layer.sub_mlp.backward(lc.sub_cache, ds_out);
      ds_prev = Matrix(m, d);
      for (int j = 0; j < m; ++j)
        for (int u : in.super_self_and_neighbors[j])
          for (int c = 0; c < d; ++c) ds_prev(u, c) += dagg_sub(j, c);
      if (k == 0) {
        add_inplace(params.grad_embed_w, matmul(transpose(in.s0_raw), ds_prev));
        for (int c = 0; c < d; ++c) {
          double sum = 0.0;
          for (int j = 0; j < m; ++j) sum += ds_prev(j, c);
          params.grad_embed_b(0, c) += sum;
        }
      }
    } else {
      ds_prev = Matrix(m, d);
    }

    Matrix dagg_node = layer.node_mlp.backward(lc.node_cache, dh_tilde);
    Matrix dh_prev(n, dagg_node.cols());
    for (int v = 0; v < n; ++v)
      for (int u : in.self_and_neighbors[v])
        for (int c = 0; c < dagg_node.cols(); ++c) dh_prev(u, c) += dagg_node(v, c);

    dh_next = std::move(dh_prev);
    ds_next = std::move(ds_prev);
  }
}

namespace {

void update_bn_running(TlgnnParameters& params, const ForwardCache& cache) {
  if (!params.batch_norm) return;
  for (size_t k = 0; k < params.layers.size(); ++k) {
    params.layers[k].node_mlp.update_running_stats(cache.layers[k].node_cache);
    if (!cache.layers[k].sub_cache.affine.empty())
      params.layers[k].sub_mlp.update_running_stats(cache.layers[k].sub_cache);
  }
}

}  // namespace

TrainResult train_model(const ModelData& data, const std::vector<int>& train_indices,
                        const TlgnnConfig& config, const StepCallback& on_step) {
  config.validate();
  if (train_indices.empty()) throw ConfigError("train: empty training set");
  for (int i : train_indices)
    if (i < 0 || i >= static_cast<int>(data.inputs.size()))
      throw ConfigError("train: index out of range");

  TlgnnParameters params =
      TlgnnParameters::init(config, data.feature_width, data.class_count,
                            seed_for(config.seed, "init"));
  std::vector<TensorRef> tensors = params.tensors();
  AdamOptimizer adam;
  std::mt19937_64 shuffle_rng(seed_for(config.seed, "shuffle"));

  TrainResult result;
  int step = 0;
  std::vector<int> order = train_indices;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    adam.lr = config.lr * std::pow(config.lr_decay, (epoch - 1) / config.lr_decay_every);
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rand_below(shuffle_rng, i)]);

    double loss_sum = 0.0;
    int seen = 0, correct = 0;
    for (size_t at = 0; at < order.size(); at += config.batch_size) {
      size_t end = std::min(order.size(), at + config.batch_size);
      int batch = static_cast<int>(end - at);
      params.zero_grads();

      std::vector<ForwardCache> caches(batch);
      Matrix logits(batch, data.class_count);
      std::vector<int> labels(batch);
      for (int b = 0; b < batch; ++b) {
        const GraphInputs& gi = data.inputs[order[at + b]];
        ForwardResult fr = model_forward(gi, params, config, &caches[b], true);
        update_bn_running(params, caches[b]);
        for (int c = 0; c < data.class_count; ++c) logits(b, c) = fr.logits(0, c);
        labels[b] = gi.label;
        int best = 0;
        for (int c = 1; c < data.class_count; ++c)
          if (fr.logits(0, c) > fr.logits(0, best)) best = c;
        if (best == gi.label) ++correct;
      }
      Matrix dlogits;
      double loss = cross_entropy_loss(logits, labels, &dlogits);
      if (!std::isfinite(loss))
        throw DivergenceError("train: non-finite loss at epoch " + std::to_string(epoch) +
                              ", batch offset " + std::to_string(at));
      loss_sum += loss * batch;
      seen += batch;

      for (int b = 0; b < batch; ++b) {
        Matrix g(1, data.class_count);
        for (int c = 0; c < data.class_count; ++c) g(0, c) = dlogits(b, c);
        model_backward(data.inputs[order[at + b]], params, config, caches[b], g);
      }
      adam.step(tensors);
      ++step;
      if (on_step) on_step(params, step);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.loss = loss_sum / seen;
    // Accuracy of the training forwards themselves (batch statistics when
    // batch norm is on), accumulated as the epoch streams by. A separate
    // eval-mode pass would both double the epoch cost and, with per-graph
    // batches, measure a different network than the one being fit.
    stats.train_accuracy = static_cast<double>(correct) / seen;
    result.curve.push_back(stats);
    result.epochs_run = epoch;
    if (config.early_stop_train_acc > 0.0 &&
        stats.train_accuracy >= config.early_stop_train_acc)
      break;
  }

  result.params = std::move(params);
  return result;
}

EvalResult evaluate_model(const ModelData& data, const std::vector<int>& indices,
                          const TlgnnParameters& params, const TlgnnConfig& config) {
  if (indices.empty()) throw ConfigError("evaluate: empty index set");
  Matrix logits(static_cast<int>(indices.size()), params.class_count);
  std::vector<int> labels(indices.size());
  for (size_t i = 0; i < indices.size(); ++i) {
    ForwardResult fr = model_forward(data.inputs[indices[i]], params, config, nullptr, false);
    for (int c = 0; c < params.class_count; ++c) logits(static_cast<int>(i), c) = fr.logits(0, c);
    labels[i] = data.inputs[indices[i]].label;
  }
  EvalResult out;
  out.loss = cross_entropy_loss(logits, labels, nullptr);
  out.predictions = predict_classes(logits);
  int hits = 0;
  for (size_t i = 0; i < indices.size(); ++i) hits += out.predictions[i] == labels[i];
  out.accuracy = static_cast<double>(hits) / static_cast<double>(indices.size());
  return out;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, uint64_t seed) {
  if (folds < 1 || folds > static_cast<int>(labels.size()))
    throw ConfigError("stratified_folds: folds must be in [1, dataset size]");
  int classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<int> fold_of(labels.size(), 0);
  std::mt19937_64 rng(seed);
  for (int c = 0; c < classes; ++c) {
    std::vector<int> idx;
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) idx.push_back(static_cast<int>(i));
    for (size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[rand_below(rng, i)]);
    for (size_t i = 0; i < idx.size(); ++i) fold_of[idx[i]] = static_cast<int>(i % folds);
  }
  return fold_of;
}

CvResult cross_validate(const ModelData& data, const TlgnnConfig& config, int folds) {
  config.validate();
  std::vector<int> labels;
  labels.reserve(data.inputs.size());
  for (const auto& gi : data.inputs) labels.push_back(gi.label);
  std::vector<int> fold_of = stratified_folds(labels, folds, seed_for(config.seed, "folds"));

  for (int f = 0; f < folds; ++f) {
    std::vector<char> present(data.class_count, 0);
    for (size_t i = 0; i < labels.size(); ++i)
      if (fold_of[i] == f) present[labels[i]] = 1;
    for (int c = 0; c < data.class_count; ++c)
      if (!present[c])
        std::cerr << "warning: class " << c << " absent from test fold " << f << "\n";
  }

  CvResult cv;
  cv.folds.resize(folds);
  std::atomic<int> next{0};
  auto run_fold = [&](int f) {
    std::vector<int> train_idx, test_idx;
    for (size_t i = 0; i < fold_of.size(); ++i)
      (fold_of[i] == f ? test_idx : train_idx).push_back(static_cast<int>(i));
    TlgnnConfig fold_cfg = config;
    fold_cfg.seed = seed_for(config.seed, "fold" + std::to_string(f));
    TrainResult tr = train_model(data, train_idx, fold_cfg);
    EvalResult ev = evaluate_model(data, test_idx, tr.params, fold_cfg);
    FoldResult& fr = cv.folds[f];
    fr.fold = f;
    fr.test_accuracy = ev.accuracy;
    fr.test_loss = ev.loss;
    fr.epochs_run = tr.epochs_run;
    fr.curve = tr.curve;
  };

  int workers = std::min(config.threads, folds);
  if (workers <= 1) {
    for (int f = 0; f < folds; ++f) run_fold(f);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int f = next.fetch_add(1); f < folds; f = next.fetch_add(1)) run_fold(f);
      });
    for (auto& th : pool) th.join();
  }

  double sum = 0.0;
  for (const auto& fr : cv.folds) sum += fr.test_accuracy;
  cv.mean_accuracy = sum / folds;
  double sq = 0.0;
  for (const auto& fr : cv.folds) {
    double dlt = fr.test_accuracy - cv.mean_accuracy;
    sq += dlt * dlt;
  }
  cv.stddev_accuracy = folds > 1 ? std::sqrt(sq / (folds - 1)) : 0.0;
  return cv;
}

std::vector<std::pair<double, double>> attention_report(const TlgnnParameters& params) {
  std::vector<std::pair<double, double>> out;
  for (const auto& layer : params.layers)
    out.push_back(attention_weights(layer.att(0, 0), layer.att(0, 1)));
  return out;
}

std::string attention_csv(const TlgnnParameters& params) {
  std::ostringstream os;
  os.precision(17);
  os << "layer,alpha,beta\n";
  auto report = attention_report(params);
  for (size_t k = 0; k < report.size(); ++k)
    os << (k + 1) << ',' << report[k].first << ',' << report[k].second << '\n';
  return os.str();
}

namespace {

void append_curve(std::ostringstream& os, int fold, const std::vector<EpochStats>& curve) {
  for (const auto& e : curve)
    os << e.epoch << ',' << fold << ",train," << e.loss << ',' << e.train_accuracy << '\n';
}

}  // namespace

std::string metrics_csv(const CvResult& cv) {
  std::ostringstream os;
  os.precision(17);
  os << "epoch,fold,split,loss,accuracy\n";
  for (const auto& fr : cv.folds) {
    append_curve(os, fr.fold, fr.curve);
    os << fr.epochs_run << ',' << fr.fold << ",test," << fr.test_loss << ','
       << fr.test_accuracy << '\n';
  }
  return os.str();
}

std::string metrics_csv(const TrainResult& tr) {
  std::ostringstream os;
  os.precision(17);
  os << "epoch,fold,split,loss,accuracy\n";
  append_curve(os, -1, tr.curve);
  return os.str();
}

namespace {

// Trainable tensors plus batch-norm running statistics; everything a reload
// needs to reproduce eval-mode forwards bit for bit.
std::vector<TensorRef> checkpoint_tensors(TlgnnParameters& p) {
  std::vector<TensorRef> out = p.tensors();
  for (size_t k = 0; k < p.layers.size(); ++k) {
    std::string prefix = "layer" + std::to_string(k);
    p.layers[k].node_mlp.collect_state(prefix + ".node", out);
    p.layers[k].sub_mlp.collect_state(prefix + ".sub", out);
  }
  return out;
}

}  // namespace

nlohmann::json checkpoint_to_json(const TlgnnParameters& params, const TlgnnConfig& config) {
  nlohmann::json j;
  j["format"] = "tlgnn-checkpoint-v1";
  j["config"] = config_to_json(config);
  j["feature_width"] = params.feature_width;
  j["class_count"] = params.class_count;
  j["seed"] = config.seed;
  nlohmann::json tensors = nlohmann::json::object();
  TlgnnParameters copy = params;
  for (const auto& t : checkpoint_tensors(copy)) {
    std::vector<double> flat(t.value->data(), t.value->data() + t.value->size());
    tensors[t.name] = {{"shape", {t.value->rows(), t.value->cols()}}, {"data", flat}};
  }
  j["tensors"] = std::move(tensors);
  return j;
}

std::pair<TlgnnParameters, TlgnnConfig> checkpoint_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "tlgnn-checkpoint-v1")
      throw IngestError("checkpoint: unknown format tag");
    TlgnnConfig config = config_from_json(j.at("config"));
    int fw = j.at("feature_width").get<int>();
    int cc = j.at("class_count").get<int>();
    TlgnnParameters params = TlgnnParameters::init(config, fw, cc, config.seed);
    for (const auto& t : checkpoint_tensors(params)) {
      if (!j.at("tensors").contains(t.name))
        throw IngestError("checkpoint: missing tensor " + t.name);
      const auto& tj = j.at("tensors").at(t.name);
      int rows = tj.at("shape").at(0).get<int>();
      int cols = tj.at("shape").at(1).get<int>();
      if (rows != t.value->rows() || cols != t.value->cols())
        throw IngestError("checkpoint: shape mismatch for " + t.name);
      std::vector<double> flat = tj.at("data").get<std::vector<double>>();
      if (flat.size() != t.value->size())
        throw IngestError("checkpoint: data size mismatch for " + t.name);
      std::copy(flat.begin(), flat.end(), t.value->data());
    }
    return {std::move(params), config};
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(std::string("checkpoint json: ") + e.what());
  }
}

std::function<std::vector<double>(const Graph&)> make_logit_embedding(
    const TlgnnParameters& params, const TlgnnConfig& config) {
  auto shared = std::make_shared<std::pair<TlgnnParameters, TlgnnConfig>>(params, config);
  return [shared](const Graph& g) {
    GraphInputs in = build_graph_inputs(g, shared->second);
    ForwardResult fr = model_forward(in, shared->first, shared->second, nullptr, false);
    return std::vector<double>(fr.logits.data(), fr.logits.data() + fr.logits.size());
  };
}

}  // namespace tlgnn
