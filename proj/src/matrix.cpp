#include "tlgnn/matrix.hpp"

#include "tlgnn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace tlgnn {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ConfigError("matmul: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    const double* arow = a.row(i);
    double* orow = out.row(i);
    for (int k = 0; k < a.cols(); ++k) {
      double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.row(k);
      for (int j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

void add_inplace(Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ConfigError("add_inplace: shape mismatch");
  for (size_t i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
}

void scale_inplace(Matrix& a, double s) {
  for (size_t i = 0; i < a.size(); ++i) a.data()[i] *= s;
}

bool all_finite(const Matrix& a) {
  for (size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) return false;
  return true;
}

std::vector<int> canonical_row_order(const Matrix& src, std::vector<int> rows) {
  const size_t bytes = size_t(src.cols()) * sizeof(double);
  std::sort(rows.begin(), rows.end(), [&](int x, int y) {
    int c = std::memcmp(src.row(x), src.row(y), bytes);
    return c != 0 ? c < 0 : x < y;
  });
  return rows;
}

void canonical_row_sum(const Matrix& src, const std::vector<int>& rows, double* out) {
  std::fill(out, out + src.cols(), 0.0);
  for (int r : canonical_row_order(src, rows)) {
    const double* srow = src.row(r);
    for (int c = 0; c < src.cols(); ++c) out[c] += srow[c];
  }
}

void row_max(const Matrix& src, const std::vector<int>& rows, double* out) {
  std::fill(out, out + src.cols(), 0.0);
  bool first = true;
  for (int r : rows) {
    const double* srow = src.row(r);
    for (int c = 0; c < src.cols(); ++c)
      out[c] = first ? srow[c] : std::max(out[c], srow[c]);
    first = false;
  }
}

void row_max_with_argmax(const Matrix& src, const std::vector<int>& rows, double* out,
                         int* argmax) {
  std::fill(out, out + src.cols(), 0.0);
  std::fill(argmax, argmax + src.cols(), -1);
  bool first = true;
  for (int r : rows) {
    const double* srow = src.row(r);
    for (int c = 0; c < src.cols(); ++c) {
      if (first || srow[c] > out[c]) {
        out[c] = srow[c];
        argmax[c] = r;
      }
    }
    first = false;
  }
}

}  // namespace tlgnn
