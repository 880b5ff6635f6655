#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tlgnn {

// Dense row-major double matrix. Deliberately minimal: the model needs exact
// control over evaluation order, so everything is explicit loops.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), d_(size_t(rows) * cols, 0.0) {}

  static Matrix zeros(int rows, int cols) { return Matrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return d_.size(); }
  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double& operator()(int r, int c) { return d_[size_t(r) * cols_ + c]; }
  double operator()(int r, int c) const { return d_[size_t(r) * cols_ + c]; }
  double* row(int r) { return d_.data() + size_t(r) * cols_; }
  const double* row(int r) const { return d_.data() + size_t(r) * cols_; }
  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }

  void fill(double v) { d_.assign(d_.size(), v); }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> d_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
void add_inplace(Matrix& a, const Matrix& b);
void scale_inplace(Matrix& a, double s);
bool all_finite(const Matrix& a);

// Orders row indices by the byte representation of the rows they point at.
// Bitwise-equal rows are interchangeable, so any permutation of the input that
// preserves the multiset of rows yields the same order of values.
std::vector<int> canonical_row_order(const Matrix& src, std::vector<int> rows);

// out[c] = sum of src(r, c) over `rows`, accumulated in canonical row order.
// The result is a pure function of the multiset of addressed rows, which is
// what makes permutation-invariance claims hold bitwise instead of just
// approximately.
void canonical_row_sum(const Matrix& src, const std::vector<int>& rows, double* out);

// Elementwise max over the addressed rows; empty selection gives zeros.
void row_max(const Matrix& src, const std::vector<int>& rows, double* out);

// Same, also reporting the winning row per column (first in `rows` order on
// ties, -1 when the selection is empty) so backward passes can route exactly.
void row_max_with_argmax(const Matrix& src, const std::vector<int>& rows, double* out,
                         int* argmax);

}  // namespace tlgnn
