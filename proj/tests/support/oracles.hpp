#pragma once

// Independent reference computations used only by tests.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gidx/integer_matrix.hpp"

namespace oracle {

// Rank over Q by plain Gaussian elimination on rationals.
inline std::size_t rational_rank(const gidx::IntegerMatrix& m) {
  std::vector<std::vector<mpq_class>> a(m.rows(), std::vector<mpq_class>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = mpq_class(m(i, j));
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < m.rows() && a[piv][col] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == rank || a[i][col] == 0) continue;
      const mpq_class f = a[i][col] / a[rank][col];
      for (std::size_t j = col; j < m.cols(); ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Rank over GF(p) (p prime), by elimination on residues.
inline std::size_t modular_rank(const gidx::IntegerMatrix& m, long p) {
  std::vector<std::vector<long>> a(m.rows(), std::vector<long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mpz_class r;
      mpz_fdiv_r_ui(r.get_mpz_t(), m(i, j).get_mpz_t(), static_cast<unsigned long>(p));
      a[i][j] = r.get_si();
    }
  auto inv = [p](long v) {
    long r = 1, b = v, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t piv = rank;
    while (piv < m.rows() && a[piv][col] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[rank]);
    const long iv = inv(a[rank][col]);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == rank || a[i][col] == 0) continue;
      const long f = a[i][col] * iv % p;
      for (std::size_t j = col; j < m.cols(); ++j) a[i][j] = ((a[i][j] - f * a[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

// Is the GF(2) vector `target` in the GF(2) column span of `m`? Decided by
// enumerating all 2^cols combinations; callers keep cols small.
inline bool in_gf2_span_exhaustive(const gidx::IntegerMatrix& m, const std::vector<int>& target) {
  const std::size_t c = m.cols();
  std::vector<std::uint64_t> colbits(c, 0);
  std::uint64_t want = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (target[i] & 1) want |= std::uint64_t{1} << i;
    for (std::size_t j = 0; j < c; ++j)
      if (mpz_odd_p(m(i, j).get_mpz_t())) colbits[j] |= std::uint64_t{1} << i;
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << c); ++mask) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < c; ++j)
      if (mask >> j & 1) acc ^= colbits[j];
    if (acc == want) return true;
  }
  return false;
}

}  // namespace oracle
