#pragma once

#include "tlgnn/matrix.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace tlgnn {

// Named view of one parameter tensor and its gradient accumulator.
struct TensorRef {
  std::string name;
  Matrix* value;
  Matrix* grad;
};

// Uniform-random init in [-limit, limit] from a dedicated stream.
void uniform_init(Matrix& m, double limit, uint64_t seed);
// Glorot/uniform init: limit = sqrt(6 / (fan_in + fan_out)).
void glorot_init(Matrix& m, uint64_t seed);

// Per-pass activation storage for DenseMlp.
struct MlpCache {
  Matrix input;
  std::vector<Matrix> affine;  // affine output per layer
  std::vector<Matrix> normed;  // post-batchnorm (affine copy when norm is off)
  std::vector<Matrix> active;  // post-activation per layer
  std::vector<std::vector<double>> mean, var;  // batch stats when norm is on
};

// Fully connected stack: affine -> (batch norm) -> rectifier, identity after
// the last affine. Gradients accumulate into grad_* until zero_grads().
struct DenseMlp {
  std::vector<int> widths;  // layer sizes, including input
  std::vector<Matrix> weights, biases;
  std::vector<Matrix> grad_weights, grad_biases;

  bool batch_norm = false;
  // Coarse variance floor: per-graph batches are small and full of duplicate
  // rows, so near-zero column variances are routine; 1/sqrt(eps) caps the
  // amplification a collapsing column can reach.
  double bn_eps = 1e-3;
  double bn_momentum = 0.1;
  // One entry per hidden layer; the output affine is never normalized.
  std::vector<Matrix> bn_scale, bn_shift, grad_bn_scale, grad_bn_shift;
  std::vector<Matrix> bn_running_mean, bn_running_var;

  static DenseMlp make(const std::vector<int>& widths, bool batch_norm, uint64_t seed);

  // Pure: never touches running statistics. `training` selects batch stats
  // over running stats for normalization.
  Matrix forward(const Matrix& x, MlpCache& cache, bool training) const;
  // Folds the batch statistics recorded in `cache` into the running averages.
  void update_running_stats(const MlpCache& cache);
  // Returns d(loss)/d(input); accumulates parameter grads.
  Matrix backward(const MlpCache& cache, const Matrix& grad_out);

  void collect(const std::string& prefix, std::vector<TensorRef>& out);
  // Non-trainable running statistics, for checkpointing (null grad slots).
  void collect_state(const std::string& prefix, std::vector<TensorRef>& out);
  void zero_grads();
};

// Softmax pair: returns (alpha, beta) with alpha + beta == 1.
std::pair<double, double> attention_weights(double alpha_hat, double beta_hat);

// Mean cross entropy of row logits against integer labels; writes
// d(loss)/d(logits) into grad_out when non-null.
double cross_entropy_loss(const Matrix& logits, std::span<const int> labels, Matrix* grad_out);

// Row-wise softmax probabilities.
Matrix softmax_rows(const Matrix& logits);

// Argmax per row; ties resolve to the lowest class index.
std::vector<int> predict_classes(const Matrix& logits);

// Adam with bias correction over a fixed tensor list. Moment buffers are
// keyed by position, so the tensor list must be stable across steps.
struct AdamOptimizer {
  double lr = 1e-2;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  int64_t step_count = 0;
  std::vector<Matrix> m, v;

  // Applies one update from the accumulated grads; throws DivergenceError on
  // non-finite gradients and ConfigError on shape mismatch with the moments.
  void step(const std::vector<TensorRef>& tensors);
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  int coords_checked = 0;
  int coords_skipped = 0;  // rectifier kinks straddled by the probe
  std::string worst_coord;
};

// Central-difference check of analytic gradients. `eval` must recompute the
// scalar loss from current parameter values; `tensors` supplies both the
// coordinates to perturb and the analytic gradient to compare against.
// Samples up to max_coords coordinates (all of them if the total is smaller).
GradCheckResult grad_check(const std::function<double()>& eval,
                           const std::vector<TensorRef>& tensors, double h, int max_coords,
                           uint64_t seed);

}  // namespace tlgnn
