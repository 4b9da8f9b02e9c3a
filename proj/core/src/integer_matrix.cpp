#include "gidx/integer_matrix.hpp"

#include <sstream>
#include <utility>

#include "gidx/error.hpp"

namespace gidx {

IntegerMatrix::IntegerMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Integer(0)) {}

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) {
      throw Error(ErrorCode::ShapeMismatch, "simplicial-cohomology", "IntegerMatrix",
                  "ragged row " + std::to_string(i));
    }
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntegerVector IntegerMatrix::column(std::size_t j) const {
  IntegerVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

IntegerVector IntegerMatrix::apply(const IntegerVector& x) const {
  if (x.size() != cols_) {
    throw Error(ErrorCode::ShapeMismatch, "simplicial-cohomology", "apply",
                "vector length " + std::to_string(x.size()) + " vs " + std::to_string(cols_));
  }
  IntegerVector y(rows_, Integer(0));
  for (std::size_t i = 0; i < rows_; ++i) {
    const Integer* row = &data_[i * cols_];
    for (std::size_t j = 0; j < cols_; ++j) {
      if (sgn(row[j]) != 0 && sgn(x[j]) != 0) y[i] += row[j] * x[j];
    }
  }
  return y;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool IntegerMatrix::is_zero() const {
  for (const auto& x : data_)
    if (sgn(x) != 0) return false;
  return true;
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols_ != b.rows_) {
    throw Error(ErrorCode::ShapeMismatch, "simplicial-cohomology", "multiply",
                std::to_string(a.rows_) + "x" + std::to_string(a.cols_) + " * " +
                    std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
  }
  IntegerMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (sgn(b(k, j)) != 0) c(i, j) += aik * b(k, j);
      }
    }
  }
  return c;
}

bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string IntegerMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
    os << "]\n";
  }
  return os.str();
}

IntegerVector SmithDecomposition::diagonal() const {
  const std::size_t n = std::min(D.rows(), D.cols());
  IntegerVector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = D(i, i);
  return d;
}

namespace {

// Working state for the reduction. Invariant: M = U * D * V and
// U * U_inv = I, V * V_inv = I after every elementary operation.
class SmithReducer {
 public:
  explicit SmithReducer(const IntegerMatrix& m)
      : D_(m),
        U_(IntegerMatrix::identity(m.rows())),
        U_inv_(IntegerMatrix::identity(m.rows())),
        V_(IntegerMatrix::identity(m.cols())),
        V_inv_(IntegerMatrix::identity(m.cols())) {}

  SmithDecomposition run() {
    const std::size_t m = D_.rows();
    const std::size_t n = D_.cols();
    // Alternating Hermite passes keep entry growth polynomial; the
    // elementary pass below then only has to fix divisibility and order.
    for (int pass = 0; pass < 64 && !is_diagonal(); ++pass) {
      hermite(false);
      if (is_diagonal()) break;
      hermite(true);
    }
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
      if (!move_smallest_to(t)) break;
      reduce_pivot(t);
      if (sgn(D_(t, t)) < 0) negate_row(t);
    }
    SmithDecomposition out{std::move(U_), std::move(D_), std::move(V_), std::move(U_inv_),
                           std::move(V_inv_), t};
    return out;
  }

 private:
  bool is_diagonal() const {
    for (std::size_t i = 0; i < D_.rows(); ++i)
      for (std::size_t j = 0; j < D_.cols(); ++j)
        if (i != j && sgn(D_(i, j)) != 0) return false;
    return true;
  }

  // Column-style Hermite form (lower echelon, entries left of each pivot
  // reduced into [0, pivot)). With `rows` set, the same on the transpose
  // using row operations. Columns are absorbed one at a time and the
  // partial form is fully reduced after each, which bounds entry size.
  void hermite(bool rows) {
    auto at = [&](std::size_t r, std::size_t c) -> const Integer& {
      return rows ? D_(c, r) : D_(r, c);
    };
    const std::size_t nr = rows ? D_.cols() : D_.rows();
    const std::size_t nc = rows ? D_.rows() : D_.cols();
    auto swap_lines = [&](std::size_t a, std::size_t b) {
      if (rows) swap_rows(a, b); else swap_cols(a, b);
    };
    auto add_line = [&](std::size_t i, std::size_t j, const Integer& c) {
      if (rows) add_row(i, j, c); else add_col(i, j, c);
    };
    auto negate_line = [&](std::size_t a) {
      if (rows) negate_row(a); else negate_col(a);
    };
    auto bezout = [&](std::size_t i, std::size_t p, std::size_t r) {
      const Integer a = at(r, i);
      const Integer b = at(r, p);
      Integer g, s, u;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), u.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      Integer x = -b / g;
      Integer y = a / g;
      if (rows) combine_rows(i, p, s, u, x, y); else combine_cols(i, p, s, u, x, y);
    };

    std::vector<std::size_t> pivot_row;
    std::size_t p = 0;
    for (std::size_t k = 0; k < nc; ++k) {
      swap_lines(p, k);
      std::size_t i = 0;
      bool found = false;
      std::size_t r = 0;
      for (; r < nr; ++r) {
        if (i < p && pivot_row[i] == r) {
          if (sgn(at(r, p)) != 0) bezout(i, p, r);
          ++i;
          continue;
        }
        if (sgn(at(r, p)) != 0) {
          found = true;
          break;
        }
      }
      if (!found) continue;
      for (std::size_t q = p; q > i; --q) swap_lines(q, q - 1);
      pivot_row.insert(pivot_row.begin() + static_cast<std::ptrdiff_t>(i), r);
      ++p;
      for (std::size_t a = 0; a < p; ++a)
        if (sgn(at(pivot_row[a], a)) < 0) negate_line(a);
      for (std::size_t a = 0; a < p; ++a) {
        const std::size_t ra = pivot_row[a];
        for (std::size_t b = 0; b < a; ++b) {
          if (sgn(at(ra, b)) == 0) continue;
          Integer q;
          mpz_fdiv_q(q.get_mpz_t(), at(ra, b).get_mpz_t(), at(ra, a).get_mpz_t());
          if (sgn(q) != 0) add_line(b, a, -q);
        }
      }
    }
  }

  bool move_smallest_to(std::size_t t) {
    bool found = false;
    std::size_t bi = t, bj = t;
    Integer best;
    for (std::size_t i = t; i < D_.rows(); ++i) {
      for (std::size_t j = t; j < D_.cols(); ++j) {
        const Integer& x = D_(i, j);
        if (sgn(x) == 0) continue;
        if (!found || mpz_cmpabs(x.get_mpz_t(), best.get_mpz_t()) < 0) {
          best = x;
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!found) return false;
    swap_rows(t, bi);
    swap_cols(t, bj);
    return true;
  }

  void reduce_pivot(std::size_t t) {
    for (;;) {
      bool dirty = false;
      // Column below the pivot.
      for (std::size_t i = t + 1; i < D_.rows(); ++i) {
        if (sgn(D_(i, t)) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), D_(i, t).get_mpz_t(), D_(t, t).get_mpz_t());
        if (sgn(q) != 0) add_row(i, t, -q);
        if (sgn(D_(i, t)) != 0) {
          swap_rows(t, i);
          dirty = true;
        }
      }
      // Row right of the pivot.
      for (std::size_t j = t + 1; j < D_.cols(); ++j) {
        if (sgn(D_(t, j)) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), D_(t, j).get_mpz_t(), D_(t, t).get_mpz_t());
        if (sgn(q) != 0) add_col(j, t, -q);
        if (sgn(D_(t, j)) != 0) {
          swap_cols(t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // Divisibility: the pivot must divide the whole trailing block.
      bool fixed = false;
      for (std::size_t i = t + 1; i < D_.rows() && !fixed; ++i) {
        for (std::size_t j = t + 1; j < D_.cols(); ++j) {
          if (sgn(D_(i, j)) == 0) continue;
          if (!mpz_divisible_p(D_(i, j).get_mpz_t(), D_(t, t).get_mpz_t())) {
            add_row(t, i, Integer(1));
            fixed = true;
            break;
          }
        }
      }
      if (!fixed) return;
    }
  }

  // row_i += c * row_j
  void add_row(std::size_t i, std::size_t j, const Integer& c) {
    for (std::size_t k = 0; k < D_.cols(); ++k)
      if (sgn(D_(j, k)) != 0) D_(i, k) += c * D_(j, k);
    for (std::size_t k = 0; k < U_.rows(); ++k)
      if (sgn(U_(k, i)) != 0) U_(k, j) -= c * U_(k, i);
    for (std::size_t k = 0; k < U_inv_.cols(); ++k)
      if (sgn(U_inv_(j, k)) != 0) U_inv_(i, k) += c * U_inv_(j, k);
  }

  // col_i += c * col_j
  void add_col(std::size_t i, std::size_t j, const Integer& c) {
    for (std::size_t k = 0; k < D_.rows(); ++k)
      if (sgn(D_(k, j)) != 0) D_(k, i) += c * D_(k, j);
    for (std::size_t k = 0; k < V_.cols(); ++k)
      if (sgn(V_(i, k)) != 0) V_(j, k) -= c * V_(i, k);
    for (std::size_t k = 0; k < V_inv_.rows(); ++k)
      if (sgn(V_inv_(k, j)) != 0) V_inv_(k, i) += c * V_inv_(k, j);
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < D_.cols(); ++k) std::swap(D_(a, k), D_(b, k));
    for (std::size_t k = 0; k < U_.rows(); ++k) std::swap(U_(k, a), U_(k, b));
    for (std::size_t k = 0; k < U_inv_.cols(); ++k) std::swap(U_inv_(a, k), U_inv_(b, k));
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t k = 0; k < D_.rows(); ++k) std::swap(D_(k, a), D_(k, b));
    for (std::size_t k = 0; k < V_.cols(); ++k) std::swap(V_(a, k), V_(b, k));
    for (std::size_t k = 0; k < V_inv_.rows(); ++k) std::swap(V_inv_(k, a), V_inv_(k, b));
  }

  // (row_i, row_p) <- (s row_i + u row_p, x row_i + y row_p), s y - u x = 1
  void combine_rows(std::size_t i, std::size_t p, const Integer& s, const Integer& u,
                    const Integer& x, const Integer& y) {
    for (std::size_t k = 0; k < D_.cols(); ++k) {
      const Integer a = D_(i, k), b = D_(p, k);
      D_(i, k) = s * a + u * b;
      D_(p, k) = x * a + y * b;
    }
    for (std::size_t k = 0; k < U_inv_.cols(); ++k) {
      const Integer a = U_inv_(i, k), b = U_inv_(p, k);
      U_inv_(i, k) = s * a + u * b;
      U_inv_(p, k) = x * a + y * b;
    }
    for (std::size_t k = 0; k < U_.rows(); ++k) {
      const Integer a = U_(k, i), b = U_(k, p);
      U_(k, i) = y * a - x * b;
      U_(k, p) = s * b - u * a;
    }
  }

  // (col_i, col_p) <- (s col_i + u col_p, x col_i + y col_p), s y - u x = 1
  void combine_cols(std::size_t i, std::size_t p, const Integer& s, const Integer& u,
                    const Integer& x, const Integer& y) {
    for (std::size_t k = 0; k < D_.rows(); ++k) {
      const Integer a = D_(k, i), b = D_(k, p);
      D_(k, i) = s * a + u * b;
      D_(k, p) = x * a + y * b;
    }
    for (std::size_t k = 0; k < V_inv_.rows(); ++k) {
      const Integer a = V_inv_(k, i), b = V_inv_(k, p);
      V_inv_(k, i) = s * a + u * b;
      V_inv_(k, p) = x * a + y * b;
    }
    for (std::size_t k = 0; k < V_.cols(); ++k) {
      const Integer a = V_(i, k), b = V_(p, k);
      V_(i, k) = y * a - x * b;
      V_(p, k) = s * b - u * a;
    }
  }

  void negate_col(std::size_t a) {
    for (std::size_t k = 0; k < D_.rows(); ++k) D_(k, a) = -D_(k, a);
    for (std::size_t k = 0; k < V_.cols(); ++k) V_(a, k) = -V_(a, k);
    for (std::size_t k = 0; k < V_inv_.rows(); ++k) V_inv_(k, a) = -V_inv_(k, a);
  }

  void negate_row(std::size_t a) {
    for (std::size_t k = 0; k < D_.cols(); ++k) D_(a, k) = -D_(a, k);
    for (std::size_t k = 0; k < U_.rows(); ++k) U_(k, a) = -U_(k, a);
    for (std::size_t k = 0; k < U_inv_.cols(); ++k) U_inv_(a, k) = -U_inv_(a, k);
  }

  IntegerMatrix D_, U_, U_inv_, V_, V_inv_;
};

}  // namespace

SmithDecomposition smith_normal_form(const IntegerMatrix& m) { return SmithReducer(m).run(); }

std::optional<IntegerVector> solve_integer(const SmithDecomposition& snf, const IntegerVector& b) {
  // A = U D V  =>  D (V x) = U^{-1} b.
  const IntegerVector c = snf.U_inv.apply(b);
  IntegerVector y(snf.D.cols(), Integer(0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < snf.rank) {
      const Integer& d = snf.D(i, i);
      if (!mpz_divisible_p(c[i].get_mpz_t(), d.get_mpz_t())) return std::nullopt;
      mpz_divexact(y[i].get_mpz_t(), c[i].get_mpz_t(), d.get_mpz_t());
    } else if (sgn(c[i]) != 0) {
      return std::nullopt;
    }
  }
  return snf.V_inv.apply(y);
}

std::optional<IntegerVector> solve_integer(const IntegerMatrix& a, const IntegerVector& b) {
  return solve_integer(smith_normal_form(a), b);
}

Integer determinant(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "simplicial-cohomology", "determinant",
                "matrix is not square");
  }
  const std::size_t n = m.rows();
  if (n == 0) return Integer(1);
  IntegerMatrix a = m;
  Integer prev(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(a(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(a(p, k)) == 0) ++p;
      if (p == n) return Integer(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

}  // namespace gidx
