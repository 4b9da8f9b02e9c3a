#include "gidx/cohomology.hpp"

#include <string>

#include "gidx/error.hpp"

namespace gidx {

namespace {

constexpr const char* kModule = "simplicial-cohomology";

void require_length(const SimplicialComplex& x, int k, const Cochain& c, const char* op) {
  if (c.size() != x.count(k)) {
    throw Error(ErrorCode::ShapeMismatch, kModule, op,
                "cochain of length " + std::to_string(c.size()) + " for " +
                    std::to_string(x.count(k)) + " simplices of dimension " + std::to_string(k));
  }
}

Integer floor_mod(const Integer& a, long n) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

// Kernel/image bookkeeping shared by cohomology_group and classify_cocycle.
struct Presentation {
  SmithDecomposition b;  // of delta_k
  SmithDecomposition c;  // of the image of delta_{k-1} in kernel coordinates
  IntegerMatrix kernel;  // columns span ker delta_k
  std::size_t n = 0;
};

Presentation present(const SimplicialComplex& x, int k) {
  Presentation p;
  const IntegerMatrix delta = x.coboundary_matrix(k);
  p.n = x.count(k);
  p.b = smith_normal_form(delta);
  const std::size_t r = p.b.rank;
  const std::size_t z = p.n - r;
  p.kernel = IntegerMatrix(p.n, z);
  for (std::size_t i = 0; i < p.n; ++i)
    for (std::size_t j = 0; j < z; ++j) p.kernel(i, j) = p.b.V_inv(i, r + j);

  const IntegerMatrix prev = x.coboundary_matrix(k - 1);
  const IntegerMatrix moved = p.b.V * prev;
  IntegerMatrix image(z, prev.cols());
  for (std::size_t i = 0; i < z; ++i)
    for (std::size_t j = 0; j < prev.cols(); ++j) image(i, j) = moved(r + i, j);
  p.c = smith_normal_form(image);
  return p;
}

Cochain kernel_combination(const Presentation& p, std::size_t column) {
  Cochain g(p.n, 0);
  const std::size_t z = p.kernel.cols();
  for (std::size_t i = 0; i < p.n; ++i)
    for (std::size_t j = 0; j < z; ++j) g[i] += p.kernel(i, j) * p.c.U(j, column);
  return g;
}

void check_degree(const SimplicialComplex& x, int k, const char* op) {
  if (k < 0 || k > x.dimension()) {
    throw Error(ErrorCode::DegreeOutOfRange, kModule, op,
                "degree " + std::to_string(k) + " outside [0, " + std::to_string(x.dimension()) +
                    "]");
  }
}

}  // namespace

Cochain coboundary(const SimplicialComplex& x, int k, const Cochain& c) {
  require_length(x, k, c, "coboundary");
  return x.coboundary_matrix(k).apply(c);
}

Cochain reduce_mod(const Cochain& c, long n) {
  Cochain out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = floor_mod(c[i], n);
  return out;
}

Cochain coboundary_mod(const SimplicialComplex& x, int k, const Cochain& c, long n) {
  return reduce_mod(coboundary(x, k, c), n);
}

bool ClassCoordinates::is_zero() const {
  for (const auto& v : free)
    if (v != 0) return false;
  for (const auto& v : torsion)
    if (v != 0) return false;
  return true;
}

Integer ClassCoordinates::order() const {
  for (const auto& v : free)
    if (v != 0) return 0;
  Integer ord = 1;
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    if (torsion[i] == 0) continue;
    Integer g;
    mpz_gcd(g.get_mpz_t(), torsion[i].get_mpz_t(), torsion_orders[i].get_mpz_t());
    const Integer o = torsion_orders[i] / g;
    mpz_lcm(ord.get_mpz_t(), ord.get_mpz_t(), o.get_mpz_t());
  }
  return ord;
}

CohomologyGroup cohomology_group(const SimplicialComplex& x, int k) {
  check_degree(x, k, "cohomology_group");
  const Presentation p = present(x, k);
  CohomologyGroup h;
  h.degree = k;
  const std::size_t z = p.kernel.cols();
  const IntegerVector d = p.c.diagonal();
  for (std::size_t i = 0; i < z; ++i) {
    if (i < p.c.rank) {
      if (d[i] > 1) {
        h.torsion.push_back(d[i]);
        h.torsion_generators.push_back(kernel_combination(p, i));
      }
    } else {
      ++h.free_rank;
      h.free_generators.push_back(kernel_combination(p, i));
    }
  }
  return h;
}

ClassCoordinates classify_cocycle(const SimplicialComplex& x, int k, const Cochain& c) {
  check_degree(x, k, "classify_cocycle");
  require_length(x, k, c, "classify_cocycle");
  const Cochain dc = coboundary(x, k, c);
  for (std::size_t i = 0; i < dc.size(); ++i) {
    if (dc[i] != 0) {
      throw Error(ErrorCode::NotACocycle, kModule, "classify_cocycle",
                  "coboundary nonzero on (" + std::to_string(k + 1) + ")-simplex " +
                      SimplicialComplex::label(x.simplices(k + 1)[i]));
    }
  }
  const Presentation p = present(x, k);
  const std::size_t r = p.b.rank;
  const std::size_t z = p.kernel.cols();
  const IntegerVector vc = p.b.V.apply(c);
  IntegerVector y(vc.begin() + static_cast<std::ptrdiff_t>(r), vc.end());
  const IntegerVector w = p.c.U_inv.apply(y);
  const IntegerVector d = p.c.diagonal();

  ClassCoordinates out;
  Cochain residual = c;
  auto subtract = [&](std::size_t column, const Integer& coeff) {
    if (coeff == 0) return;
    const Cochain g = kernel_combination(p, column);
    for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= coeff * g[i];
  };
  for (std::size_t i = 0; i < z; ++i) {
    if (i < p.c.rank) {
      if (d[i] > 1) {
        Integer res;
        mpz_fdiv_r(res.get_mpz_t(), w[i].get_mpz_t(), d[i].get_mpz_t());
        out.torsion.push_back(res);
        out.torsion_orders.push_back(d[i]);
        subtract(i, res);
      }
    } else {
      out.free.push_back(w[i]);
      subtract(i, w[i]);
    }
  }

  bool residual_zero = true;
  for (const auto& v : residual)
    if (v != 0) residual_zero = false;
  if (!residual_zero) {
    if (k == 0 || !solve_integer(x.coboundary_matrix(k - 1), residual)) {
      throw Error(ErrorCode::InvalidArgument, kModule, "classify_cocycle",
                  "internal: residual after removing generators is not a coboundary");
    }
  }
  return out;
}

BocksteinResult bockstein(const SimplicialComplex& x, const Cochain& theta, long n,
                          const Cochain* shift) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, kModule, "bockstein", "n must be >= 1");
  require_length(x, 2, theta, "bockstein");
  Cochain t = reduce_mod(theta, n);
  if (shift) {
    require_length(x, 2, *shift, "bockstein");
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += n * (*shift)[i];
  }
  Cochain dt = coboundary(x, 2, t);
  BocksteinResult out;
  out.cocycle.resize(dt.size());
  for (std::size_t i = 0; i < dt.size(); ++i) {
    Integer q, r;
    mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), dt[i].get_mpz_t(), static_cast<unsigned long>(n));
    if (r != 0) {
      throw Error(ErrorCode::NotACocycle, kModule, "bockstein",
                  "delta theta nonzero mod " + std::to_string(n) + " on 3-simplex " +
                      SimplicialComplex::label(x.simplices(3)[i]));
    }
    out.cocycle[i] = q;
  }
  if (x.dimension() >= 3) out.coordinates = classify_cocycle(x, 3, out.cocycle);
  return out;
}

Cochain bockstein_preimage(const SimplicialComplex& x, int k, const Cochain& g, long d) {
  check_degree(x, k, "bockstein_preimage");
  require_length(x, k, g, "bockstein_preimage");
  if (k == 0) {
    throw Error(ErrorCode::InvalidArgument, kModule, "bockstein_preimage", "k must be >= 1");
  }
  Cochain target(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) target[i] = g[i] * d;
  auto h = solve_integer(x.coboundary_matrix(k - 1), target);
  if (!h) {
    throw Error(ErrorCode::InvalidArgument, kModule, "bockstein_preimage",
                "d * g is not a coboundary; g is not d-torsion");
  }
  return reduce_mod(*h, d);
}

}  // namespace gidx
