#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlgnn/matrix.hpp"

#include <algorithm>
#include <cmath>

using namespace tlgnn;

TEST_CASE("matmul matches a hand-computed product") {
  Matrix a(2, 3), b(3, 2);
  double av[] = {1, 2, 3, 4, 5, 6};
  double bv[] = {7, 8, 9, 10, 11, 12};
  std::copy(av, av + 6, a.data());
  std::copy(bv, bv + 6, b.data());
  Matrix c = matmul(a, b);
  CHECK(c(0, 0) == 58);
  CHECK(c(0, 1) == 64);
  CHECK(c(1, 0) == 139);
  CHECK(c(1, 1) == 154);
}

TEST_CASE("matmul skips exact zeros without changing results") {
  // The zero-skip only elides adding 0 * b, which is exact in IEEE double
  // unless b is NaN/inf; finite model code never hits that case.
  Matrix a(1, 2), b(2, 1);
  a(0, 0) = 0.0;
  a(0, 1) = 3.0;
  b(0, 0) = 123.456;
  b(1, 0) = 2.0;
  CHECK(matmul(a, b)(0, 0) == 6.0);
}

TEST_CASE("transpose, add_inplace, scale_inplace") {
  Matrix a(2, 3);
  a(0, 2) = 5.0;
  Matrix t = transpose(a);
  CHECK(t.rows() == 3);
  CHECK(t(2, 0) == 5.0);

  Matrix b(2, 3);
  b.fill(1.0);
  add_inplace(b, a);
  CHECK(b(0, 2) == 6.0);
  scale_inplace(b, 2.0);
  CHECK(b(0, 0) == 2.0);
  CHECK(b(0, 2) == 12.0);
}

TEST_CASE("all_finite detects NaN and infinity") {
  Matrix a(1, 2);
  CHECK(all_finite(a));
  a(0, 1) = std::nan("");
  CHECK(!all_finite(a));
  a(0, 1) = INFINITY;
  CHECK(!all_finite(a));
}

TEST_CASE("canonical_row_order depends only on row bytes") {
  Matrix m(3, 2);
  m(0, 0) = 2.0;
  m(1, 0) = 1.0;
  m(2, 0) = 2.0;
  auto order = canonical_row_order(m, {0, 1, 2});
  // The order is a byte order, not a numeric one; what matters is that any
  // input permutation yields the same order and duplicates keep index order.
  CHECK(order == canonical_row_order(m, {2, 1, 0}));
  CHECK(order == canonical_row_order(m, {1, 2, 0}));
  auto pos = [&](int r) {
    return std::find(order.begin(), order.end(), r) - order.begin();
  };
  CHECK(pos(0) < pos(2));  // bitwise-equal rows stay in index order
  CHECK(order.size() == 3);
}

TEST_CASE("canonical_row_sum is invariant under index permutation") {
  // Values chosen so naive left-to-right addition order matters: the unit
  // contributions are absorbed or kept depending on when the cancellation of
  // the huge pair happens.
  Matrix m(4, 1);
  m(0, 0) = 1.0;
  m(1, 0) = 1e100;
  m(2, 0) = 1.0;
  m(3, 0) = -1e100;
  double fwd = 0.0, rev = 0.0;
  canonical_row_sum(m, {0, 1, 2, 3}, &fwd);
  canonical_row_sum(m, {3, 2, 1, 0}, &rev);
  CHECK(fwd == rev);  // bitwise

  double naive_fwd = ((1.0 + 1e100) + 1.0) + -1e100;
  double naive_rev = ((-1e100 + 1.0) + 1e100) + 1.0;
  CHECK(naive_fwd != naive_rev);  // the guard the canonical order exists for
}

TEST_CASE("row_max and argmax routing") {
  Matrix m(3, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 5.0;
  m(1, 0) = 4.0;
  m(1, 1) = 5.0;
  m(2, 0) = 2.0;
  m(2, 1) = -1.0;
  double out[2];
  int arg[2];
  row_max_with_argmax(m, {0, 1, 2}, out, arg);
  CHECK(out[0] == 4.0);
  CHECK(out[1] == 5.0);
  CHECK(arg[0] == 1);
  CHECK(arg[1] == 0);  // tie keeps the first listed row

  row_max_with_argmax(m, {}, out, arg);
  CHECK(out[0] == 0.0);
  CHECK(arg[0] == -1);

  double plain[2];
  row_max(m, {2, 1}, plain);
  CHECK(plain[0] == 4.0);
  CHECK(plain[1] == 5.0);
}
