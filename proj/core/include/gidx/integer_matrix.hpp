#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace gidx {

using Integer = mpz_class;
using IntegerVector = std::vector<Integer>;

// Dense matrix of arbitrary-precision integers, row-major.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols);

  static IntegerMatrix identity(std::size_t n);
  static IntegerMatrix from_rows(const std::vector<std::vector<long>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntegerVector column(std::size_t j) const;
  IntegerVector apply(const IntegerVector& x) const;
  IntegerMatrix transpose() const;
  bool is_zero() const;

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// M = U * D * V with U, V unimodular and D diagonal (d_1 | d_2 | ... >= 0).
// The inverses are tracked alongside so callers never invert numerically.
struct SmithDecomposition {
  IntegerMatrix U, D, V;
  IntegerMatrix U_inv, V_inv;
  std::size_t rank = 0;

  IntegerVector diagonal() const;
};

SmithDecomposition smith_normal_form(const IntegerMatrix& m);

// Exact integer solution of A x = b (one particular solution), if any.
std::optional<IntegerVector> solve_integer(const SmithDecomposition& snf_of_a,
                                           const IntegerVector& b);
std::optional<IntegerVector> solve_integer(const IntegerMatrix& a, const IntegerVector& b);

// Determinant by fraction-free (Bareiss) elimination; square matrices only.
Integer determinant(const IntegerMatrix& m);

}  // namespace gidx
