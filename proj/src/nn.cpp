#include "tlgnn/nn.hpp"

#include "tlgnn/errors.hpp"
#include "tlgnn/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace tlgnn {

void uniform_init(Matrix& m, double limit, uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < m.size(); ++i) m.data()[i] = (2.0 * rand_unit(rng) - 1.0) * limit;
}

void glorot_init(Matrix& m, uint64_t seed) {
  double limit = std::sqrt(6.0 / (m.rows() + m.cols()));
  uniform_init(m, limit, seed);
}

DenseMlp DenseMlp::make(const std::vector<int>& widths, bool batch_norm, uint64_t seed) {
  if (widths.size() < 2) throw ConfigError("DenseMlp: need at least input and output widths");
  DenseMlp mlp;
  mlp.widths = widths;
  mlp.batch_norm = batch_norm;
  int layers = static_cast<int>(widths.size()) - 1;
  for (int l = 0; l < layers; ++l) {
    Matrix w(widths[l], widths[l + 1]);
    glorot_init(w, seed_for(seed, "w" + std::to_string(l)));
    mlp.weights.push_back(std::move(w));
    mlp.biases.emplace_back(1, widths[l + 1]);
    mlp.grad_weights.emplace_back(widths[l], widths[l + 1]);
    mlp.grad_biases.emplace_back(1, widths[l + 1]);
    // Normalization sits between a hidden affine and its rectifier. The
    // output affine stays raw: normalizing it would pin every column's
    // batch mean, and sum pooling of such columns collapses to the shift
    // parameter alone.
    if (batch_norm && l + 1 < layers) {
      Matrix scale(1, widths[l + 1]);
      scale.fill(1.0);
      mlp.bn_scale.push_back(std::move(scale));
      mlp.bn_shift.emplace_back(1, widths[l + 1]);
      mlp.grad_bn_scale.emplace_back(1, widths[l + 1]);
      mlp.grad_bn_shift.emplace_back(1, widths[l + 1]);
      mlp.bn_running_mean.emplace_back(1, widths[l + 1]);
      Matrix rv(1, widths[l + 1]);
      rv.fill(1.0);
      mlp.bn_running_var.push_back(std::move(rv));
    }
  }
  return mlp;
}

Matrix DenseMlp::forward(const Matrix& x, MlpCache& cache, bool training) const {
  if (x.cols() != widths.front()) throw ConfigError("DenseMlp: input width mismatch");
  int layers = static_cast<int>(weights.size());
  cache.input = x;
  cache.affine.assign(layers, {});
  cache.normed.assign(layers, {});
  cache.active.assign(layers, {});
  cache.mean.assign(layers, {});
  cache.var.assign(layers, {});

  Matrix cur = x;
  for (int l = 0; l < layers; ++l) {
    Matrix a = matmul(cur, weights[l]);
    for (int r = 0; r < a.rows(); ++r)
      for (int c = 0; c < a.cols(); ++c) a(r, c) += biases[l](0, c);
    cache.affine[l] = a;

    Matrix z = a;
    if (batch_norm && l + 1 < layers) {
      int rows = z.rows(), cols = z.cols();
      std::vector<double> mean(cols, 0.0), var(cols, 0.0);
      if (training) {
        // Batch statistics reduce over rows in canonical order so that
        // relabeled inputs normalize bitwise identically.
        std::vector<int> all(rows);
        for (int r = 0; r < rows; ++r) all[r] = r;
        canonical_row_sum(a, all, mean.data());
        for (int c = 0; c < cols; ++c) mean[c] /= rows;
        Matrix sq(rows, cols);
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < cols; ++c)
            sq(r, c) = (a(r, c) - mean[c]) * (a(r, c) - mean[c]);
        canonical_row_sum(sq, all, var.data());
        for (int c = 0; c < cols; ++c) var[c] /= rows;
      } else {
        for (int c = 0; c < cols; ++c) {
          mean[c] = bn_running_mean[l](0, c);
          var[c] = bn_running_var[l](0, c);
        }
      }
      for (int c = 0; c < cols; ++c) {
        double inv = 1.0 / std::sqrt(var[c] + bn_eps);
        for (int r = 0; r < rows; ++r)
          z(r, c) = bn_scale[l](0, c) * (a(r, c) - mean[c]) * inv + bn_shift[l](0, c);
      }
      cache.mean[l] = std::move(mean);
      cache.var[l] = std::move(var);
    }
    cache.normed[l] = z;

    // Rectify between layers; the final affine output passes through as is.
    if (l + 1 < layers) {
      for (int r = 0; r < z.rows(); ++r)
        for (int c = 0; c < z.cols(); ++c) z(r, c) = std::max(0.0, z(r, c));
    }
    cache.active[l] = z;
    cur = std::move(z);
  }
  return cur;
}

void DenseMlp::update_running_stats(const MlpCache& cache) {
  if (!batch_norm) return;
  for (size_t l = 0; l < bn_running_mean.size(); ++l) {
    if (cache.mean[l].empty()) continue;
    for (int c = 0; c < bn_running_mean[l].cols(); ++c) {
      bn_running_mean[l](0, c) =
          (1.0 - bn_momentum) * bn_running_mean[l](0, c) + bn_momentum * cache.mean[l][c];
      bn_running_var[l](0, c) =
          (1.0 - bn_momentum) * bn_running_var[l](0, c) + bn_momentum * cache.var[l][c];
    }
  }
}

Matrix DenseMlp::backward(const MlpCache& cache, const Matrix& grad_out) {
  int layers = static_cast<int>(weights.size());
  Matrix grad = grad_out;
  for (int l = layers - 1; l >= 0; --l) {
    // Rectifier mask (skipped on the output layer).
    if (l + 1 < layers) {
      const Matrix& z = cache.normed[l];
      for (int r = 0; r < grad.rows(); ++r)
        for (int c = 0; c < grad.cols(); ++c)
          if (z(r, c) <= 0.0) grad(r, c) = 0.0;
    }

    if (batch_norm && l + 1 < layers) {
      const Matrix& a = cache.affine[l];
      int rows = a.rows(), cols = a.cols();
      const auto& mean = cache.mean[l];
      const auto& var = cache.var[l];
      Matrix dx(rows, cols);
      for (int c = 0; c < cols; ++c) {
        double inv = 1.0 / std::sqrt(var[c] + bn_eps);
        double sum_dy = 0.0, sum_dy_xhat = 0.0;
        for (int r = 0; r < rows; ++r) {
          double xhat = (a(r, c) - mean[c]) * inv;
          double dy = grad(r, c);
          sum_dy += dy;
          sum_dy_xhat += dy * xhat;
        }
        grad_bn_scale[l](0, c) += sum_dy_xhat;
        grad_bn_shift[l](0, c) += sum_dy;
        double scale = bn_scale[l](0, c);
        for (int r = 0; r < rows; ++r) {
          double xhat = (a(r, c) - mean[c]) * inv;
          dx(r, c) =
              scale * inv / rows * (rows * grad(r, c) - sum_dy - xhat * sum_dy_xhat);
        }
      }
      grad = std::move(dx);
    }

    const Matrix& in = l == 0 ? cache.input : cache.active[l - 1];
    add_inplace(grad_weights[l], matmul(transpose(in), grad));
    for (int c = 0; c < grad.cols(); ++c) {
      double s = 0.0;
      for (int r = 0; r < grad.rows(); ++r) s += grad(r, c);
      grad_biases[l](0, c) += s;
    }
    grad = matmul(grad, transpose(weights[l]));
  }
  return grad;
}

void DenseMlp::collect(const std::string& prefix, std::vector<TensorRef>& out) {
  for (size_t l = 0; l < weights.size(); ++l) {
    out.push_back({prefix + ".w" + std::to_string(l), &weights[l], &grad_weights[l]});
    out.push_back({prefix + ".b" + std::to_string(l), &biases[l], &grad_biases[l]});
    if (batch_norm && l < bn_scale.size()) {
      out.push_back(
          {prefix + ".bn_scale" + std::to_string(l), &bn_scale[l], &grad_bn_scale[l]});
      out.push_back(
          {prefix + ".bn_shift" + std::to_string(l), &bn_shift[l], &grad_bn_shift[l]});
    }
  }
}

void DenseMlp::collect_state(const std::string& prefix, std::vector<TensorRef>& out) {
  for (size_t l = 0; l < bn_running_mean.size(); ++l) {
    out.push_back(
        {prefix + ".bn_mean" + std::to_string(l), &bn_running_mean[l], nullptr});
    out.push_back({prefix + ".bn_var" + std::to_string(l), &bn_running_var[l], nullptr});
  }
}

void DenseMlp::zero_grads() {
  for (auto& g : grad_weights) g.fill(0.0);
  for (auto& g : grad_biases) g.fill(0.0);
  for (auto& g : grad_bn_scale) g.fill(0.0);
  for (auto& g : grad_bn_shift) g.fill(0.0);
}

std::pair<double, double> attention_weights(double alpha_hat, double beta_hat) {
  double m = std::max(alpha_hat, beta_hat);
  double ea = std::exp(alpha_hat - m), eb = std::exp(beta_hat - m);
  double alpha = ea / (ea + eb);
  return {alpha, 1.0 - alpha};
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (int r = 0; r < logits.rows(); ++r) {
    double m = logits(r, 0);
    for (int c = 1; c < logits.cols(); ++c) m = std::max(m, logits(r, c));
    double z = 0.0;
    for (int c = 0; c < logits.cols(); ++c) z += std::exp(logits(r, c) - m);
    for (int c = 0; c < logits.cols(); ++c) out(r, c) = std::exp(logits(r, c) - m) / z;
  }
  return out;
}

double cross_entropy_loss(const Matrix& logits, std::span<const int> labels, Matrix* grad_out) {
  int batch = logits.rows(), classes = logits.cols();
  if (batch == 0) throw ConfigError("cross_entropy_loss: empty batch");
  if (static_cast<int>(labels.size()) != batch)
    throw ConfigError("cross_entropy_loss: label count mismatch");
  for (int y : labels)
    if (y < 0 || y >= classes) throw ConfigError("cross_entropy_loss: label out of range");

  double loss = 0.0;
  Matrix probs = softmax_rows(logits);
  for (int r = 0; r < batch; ++r) {
    double m = logits(r, 0);
    for (int c = 1; c < classes; ++c) m = std::max(m, logits(r, c));
    double z = 0.0;
    for (int c = 0; c < classes; ++c) z += std::exp(logits(r, c) - m);
    loss += m + std::log(z) - logits(r, labels[r]);
  }
  loss /= batch;
  if (grad_out) {
    *grad_out = probs;
    for (int r = 0; r < batch; ++r) (*grad_out)(r, labels[r]) -= 1.0;
    scale_inplace(*grad_out, 1.0 / batch);
  }
  return loss;
}

std::vector<int> predict_classes(const Matrix& logits) {
  std::vector<int> out(logits.rows());
  for (int r = 0; r < logits.rows(); ++r) {
    int best = 0;
    for (int c = 1; c < logits.cols(); ++c)
      if (logits(r, c) > logits(r, best)) best = c;  // ties keep the lowest class
    out[r] = best;
  }
  return out;
}

void AdamOptimizer::step(const std::vector<TensorRef>& tensors) {
  if (m.empty()) {
    for (const auto& t : tensors) {
      m.emplace_back(t.value->rows(), t.value->cols());
      v.emplace_back(t.value->rows(), t.value->cols());
    }
  }
  if (m.size() != tensors.size()) throw ConfigError("adam: tensor list changed size");
  for (size_t i = 0; i < tensors.size(); ++i) {
    if (!m[i].same_shape(*tensors[i].value))
      throw ConfigError("adam: tensor shape changed for " + tensors[i].name);
    if (!all_finite(*tensors[i].grad))
      throw DivergenceError("adam: non-finite gradient in " + tensors[i].name);
  }

  ++step_count;
  double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
  double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
  for (size_t i = 0; i < tensors.size(); ++i) {
    double* p = tensors[i].value->data();
    const double* g = tensors[i].grad->data();
    double* mi = m[i].data();
    double* vi = v[i].data();
    size_t count = tensors[i].value->size();
    for (size_t k = 0; k < count; ++k) {
      mi[k] = beta1 * mi[k] + (1.0 - beta1) * g[k];
      vi[k] = beta2 * vi[k] + (1.0 - beta2) * g[k] * g[k];
      double mhat = mi[k] / bc1;
      double vhat = vi[k] / bc2;
      p[k] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

GradCheckResult grad_check(const std::function<double()>& eval,
                           const std::vector<TensorRef>& tensors, double h, int max_coords,
                           uint64_t seed) {
  struct Coord {
    size_t tensor, offset;
  };
  std::vector<Coord> coords;
  for (size_t t = 0; t < tensors.size(); ++t)
    for (size_t k = 0; k < tensors[t].value->size(); ++k) coords.push_back({t, k});

  std::mt19937_64 rng(seed);
  int take = std::min<int>(max_coords, static_cast<int>(coords.size()));
  for (int i = 0; i < take; ++i) {  // partial Fisher-Yates
    size_t j = i + rand_below(rng, coords.size() - i);
    std::swap(coords[i], coords[j]);
  }

  GradCheckResult result;
  double f0 = eval();
  for (int i = 0; i < take; ++i) {
    double* p = tensors[coords[i].tensor].value->data() + coords[i].offset;
    double analytic = tensors[coords[i].tensor].grad->data()[coords[i].offset];
    double saved = *p;
    *p = saved + h;
    double fp = eval();
    *p = saved - h;
    double fm = eval();
    *p = saved;

    // A rectifier kink between the probes shows up as a mismatch between the
    // two one-sided slopes; those coordinates are excluded.
    double side_p = (fp - f0) / h, side_m = (f0 - fm) / h;
    if (std::abs(side_p - side_m) >
        0.01 * std::max({1.0, std::abs(side_p), std::abs(side_m)})) {
      ++result.coords_skipped;
      continue;
    }

    double fd = (fp - fm) / (2.0 * h);
    // The difference quotient carries cancellation noise of a few hundred
    // ulps of f0 spread over 2h; residuals below that floor are agreement
    // within the probe's resolution (true zero gradients, e.g. biases under
    // batch normalization, land here with fd equal to pure rounding residue).
    double noise = 256.0 * std::numeric_limits<double>::epsilon() *
                   std::max(1.0, std::abs(f0)) / (2.0 * h);
    if (std::abs(fd - analytic) < noise) {
      ++result.coords_checked;
      continue;
    }
    double rel = std::abs(fd - analytic) / std::max({std::abs(fd), std::abs(analytic), 1e-8});
    ++result.coords_checked;
    if (rel > result.max_rel_error) {
      result.max_rel_error = rel;
      result.worst_coord =
          tensors[coords[i].tensor].name + "[" + std::to_string(coords[i].offset) + "]";
    }
  }
  return result;
}

}  // namespace tlgnn
