#include "gidx/chern_weil.hpp"

#include <sstream>

#include "gidx/error.hpp"
#include "gidx/parallel.hpp"

namespace gidx {

namespace {

constexpr const char* kModule = "chern-weil";

CMatrix zero(int r) { return CMatrix::Zero(r, r); }

// Pull back a 1-form given in chart-b directions through J = dy/dx.
OneFormValue pull_back(const OneFormValue& ab, const Eigen::MatrixXd& j) {
  OneFormValue out(j.cols());
  for (Eigen::Index i = 0; i < j.cols(); ++i) {
    out[i] = zero(static_cast<int>(ab.front().rows()));
    for (Eigen::Index k = 0; k < j.rows(); ++k) out[i] += j(k, i) * ab[k];
  }
  return out;
}

std::vector<double> series_log(const std::vector<double>& c) {
  // log of 1 + c1 x + c2 x^2 + ...
  std::vector<double> l(c.size(), 0.0);
  for (std::size_t k = 1; k < c.size(); ++k) {
    double s = c[k];
    for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) / static_cast<double>(k) * l[j] * c[k - j];
    l[k] = s;
  }
  return l;
}

MatrixFormField make_matrix_field(const AtlasPtr& atlas, int rank, int max_degree) {
  MatrixFormField f{atlas, max_degree, {}};
  f.v.assign(atlas->patch_count(),
             std::vector<MatrixPointForm>(atlas->node_count(),
                                          MatrixPointForm(atlas->dimension(), zero(rank))));
  return f;
}

template <typename Fn>
ScalarFormField map_points(const MatrixFormField& f, Fn fn) {
  ScalarFormField out{f.atlas, f.atlas->dimension(), {}};
  out.v.resize(f.v.size());
  for (std::size_t p = 0; p < f.v.size(); ++p) {
    out.v[p].resize(f.v[p].size());
    parallel_for(f.v[p].size(), [&](std::size_t i) { out.v[p][i] = fn(f.v[p][i]); });
  }
  return out;
}

}  // namespace

std::vector<CMatrix> chart_derivative(const std::function<CMatrix(const Coord&)>& f, const Coord& x,
                                      double step) {
  std::vector<CMatrix> out;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Coord xp = x, xm = x;
    xp(k) += step;
    xm(k) -= step;
    out.push_back((f(xp) - f(xm)) / (2.0 * step));
  }
  return out;
}

ConnectionData sample_connection(AtlasPtr atlas, int rank, ConnectionFn fn,
                                 CurvatureFn analytic_curvature) {
  ConnectionData c;
  c.atlas = atlas;
  c.rank = rank;
  c.eval = std::move(fn);
  c.analytic_curvature = std::move(analytic_curvature);
  c.samples.assign(atlas->patch_count(), std::vector<OneFormValue>(atlas->node_count()));
  for (std::size_t p = 0; p < atlas->patch_count(); ++p) {
    parallel_for(atlas->node_count(),
                 [&](std::size_t i) { c.samples[p][i] = c.eval(p, atlas->node(i)); });
  }
  return c;
}

ConnectionData average_connection(const ProjectiveBundleData& e, const ConnectionFn& raw,
                                  AtlasPtr atlas) {
  if (!e.cover().same_as(atlas->cover())) {
    throw Error(ErrorCode::IncompatibleAtlas, kModule, "average_connection",
                "bundle cover differs from the atlas nerve");
  }
  const int r = e.rank();
  const Atlas* at = atlas.get();
  ConnectionFn fn = [e, raw, at, r](std::size_t a, const Coord& x) {
    const Point p = at->to_ambient(a, x);
    OneFormValue out(at->dimension(), zero(r));
    for (std::size_t b = 0; b < at->patch_count(); ++b) {
      const double phi = at->partition(b, p);
      if (phi <= 0.0) continue;
      const OneFormValue own = raw(b, at->to_chart(b, p));
      for (const auto& m : own) {
        if (!m.allFinite()) {
          throw Error(ErrorCode::InvalidArgument, kModule, "average_connection",
                      "raw form not finite on patch " + std::to_string(b));
        }
      }
      if (b == a) {
        for (int k = 0; k < at->dimension(); ++k) out[k] += phi * own[k];
        continue;
      }
      const OneFormValue pulled = pull_back(own, at->jacobian(a, b, x));
      const CMatrix q = e.get(static_cast<int>(a), static_cast<int>(b), p);
      const CMatrix qi = e.get(static_cast<int>(b), static_cast<int>(a), p);
      const auto dqi = chart_derivative(
          [&](const Coord& z) { return e.get(static_cast<int>(b), static_cast<int>(a), at->to_ambient(a, z)); },
          x);
      for (int k = 0; k < at->dimension(); ++k) out[k] += phi * (q * pulled[k] * qi + q * dqi[k]);
    }
    return out;
  };
  return sample_connection(atlas, r, std::move(fn));
}

double compatibility_residual(const ProjectiveBundleData& e, const ConnectionData& conn) {
  const Atlas& at = *conn.atlas;
  double worst = 0.0;
  for (std::size_t a = 0; a < at.patch_count(); ++a) {
    for (std::size_t b = 0; b < at.patch_count(); ++b) {
      if (a == b) continue;
      for (const auto& o : at.overlap(a, b)) {
        const Coord& x = at.node(o.node);
        const Point p = at.ambient(a, o.node);
        const CMatrix q = e.get(static_cast<int>(a), static_cast<int>(b), p);
        const CMatrix qi = e.get(static_cast<int>(b), static_cast<int>(a), p);
        const auto dq = chart_derivative(
            [&](const Coord& z) { return e.get(static_cast<int>(a), static_cast<int>(b), at.to_ambient(a, z)); },
            x);
        const OneFormValue ab = pull_back(conn.eval(b, o.y), o.jacobian);
        const OneFormValue& aa = conn.samples[a][o.node];
        for (int k = 0; k < at.dimension(); ++k) {
          const CMatrix expected = qi * aa[k] * q + qi * dq[k];
          worst = std::max(worst, spectral_norm(ab[k] - expected));
        }
      }
    }
  }
  return worst;
}

MatrixFormField curvature(const ConnectionData& conn, bool use_override) {
  const Atlas& at = *conn.atlas;
  const int r = conn.rank;
  MatrixFormField f = make_matrix_field(conn.atlas, r, at.dimension());
  if (at.dimension() == 0) return f;
  if (use_override && conn.has_override()) {
    for (std::size_t p = 0; p < at.patch_count(); ++p)
      parallel_for(at.node_count(), [&](std::size_t i) {
        f.v[p][i].c[3] = conn.analytic_curvature(p, at.node(i));
      });
    return f;
  }
  const long n = at.grid();
  if (n < 3) {
    throw Error(ErrorCode::GridTooCoarse, kModule, "curvature",
                "grid of " + std::to_string(n) + " nodes per side cannot carry second-order stencils");
  }
  const double h = at.spacing();
  for (std::size_t p = 0; p < at.patch_count(); ++p) {
    const auto& s = conn.samples[p];
    auto deriv = [&](long i, long j, int dir, int comp) -> CMatrix {
      // derivative along dir of the comp-th coefficient at grid (i, j)
      auto val = [&](long k) -> const CMatrix& {
        return dir == 0 ? s[at.grid_index(k, j)][comp] : s[at.grid_index(i, k)][comp];
      };
      const long m = dir == 0 ? i : j;
      if (m == 0) return (-3.0 * val(0) + 4.0 * val(1) - val(2)) / (2.0 * h);
      if (m == n - 1) return (3.0 * val(n - 1) - 4.0 * val(n - 2) + val(n - 3)) / (2.0 * h);
      return (val(m + 1) - val(m - 1)) / (2.0 * h);
    };
    parallel_for(at.node_count(), [&](std::size_t idx) {
      const long i = static_cast<long>(idx) / n;
      const long j = static_cast<long>(idx) % n;
      const OneFormValue& a = s[idx];
      f.v[p][idx].c[3] = deriv(i, j, 0, 1) - deriv(i, j, 1, 0) + a[0] * a[1] - a[1] * a[0];
    });
  }
  return f;
}

CMatrix curvature_at(const ConnectionData& conn, std::size_t patch, const Coord& x, double step) {
  if (conn.has_override()) return conn.analytic_curvature(patch, x);
  auto component = [&](int k) {
    return [&, k](const Coord& z) { return conn.eval(patch, z)[k]; };
  };
  const auto d0 = chart_derivative(component(0), x, step);
  const auto d1 = chart_derivative(component(1), x, step);
  const OneFormValue a = conn.eval(patch, x);
  return d0[1] - d1[0] + a[0] * a[1] - a[1] * a[0];
}

double curvature_covariance_defect(const ProjectiveBundleData& e, const ConnectionData& conn) {
  const Atlas& at = *conn.atlas;
  double worst = 0.0;
  for (std::size_t a = 0; a < at.patch_count(); ++a) {
    for (std::size_t b = 0; b < at.patch_count(); ++b) {
      if (a == b) continue;
      const auto& ov = at.overlap(a, b);
      for (std::size_t k = 0; k < ov.size(); k += 7) {
        const auto& o = ov[k];
        const Point p = at.ambient(a, o.node);
        const CMatrix q = e.get(static_cast<int>(a), static_cast<int>(b), p);
        const CMatrix qi = e.get(static_cast<int>(b), static_cast<int>(a), p);
        const CMatrix fa = curvature_at(conn, a, at.node(o.node));
        const CMatrix fb = curvature_at(conn, b, o.y) * o.jacobian.determinant();
        worst = std::max(worst, spectral_norm(fb - qi * fa * q));
      }
    }
  }
  return worst;
}

MatrixPointForm chern_root_form(const MatrixPointForm& f) {
  MatrixPointForm x = f;
  for (auto& c : x.c) c *= kI / (2.0 * kPi);
  return x;
}

ScalarPointForm additive_series(const MatrixPointForm& x, const std::vector<double>& coeffs) {
  const auto r = x.c.front().rows();
  ScalarPointForm out(x.dim, Complex(0.0));
  out.c[0] = coeffs.empty() ? 0.0 : coeffs[0] * static_cast<double>(r);
  MatrixPointForm power = x;
  for (std::size_t k = 1; k < coeffs.size() && static_cast<int>(2 * k) <= x.dim; ++k) {
    if (k > 1) power = wedge(power, x);
    const ScalarPointForm t = trace(power);
    for (std::size_t m = 0; m < out.c.size(); ++m) out.c[m] += coeffs[k] * t.c[m];
  }
  return out;
}

ScalarPointForm multiplicative_series(const MatrixPointForm& x, const std::vector<double>& coeffs) {
  std::vector<double> l = series_log(coeffs);
  l[0] = 0.0;
  const ScalarPointForm s = additive_series(x, l);
  ScalarPointForm out(x.dim, Complex(0.0));
  out.c[0] = 1.0;
  ScalarPointForm term = out;
  for (int m = 1; 2 * m <= x.dim; ++m) {
    term = wedge(term, s);
    for (auto& c : term.c) c /= static_cast<double>(m);
    for (std::size_t k = 0; k < out.c.size(); ++k) out.c[k] += term.c[k];
  }
  return out;
}

std::vector<double> todd_coefficients() { return {1.0, 0.5, 1.0 / 12.0, 0.0, -1.0 / 720.0}; }
std::vector<double> a_hat_coefficients() { return {1.0, 0.0, -1.0 / 24.0, 0.0, 7.0 / 5760.0}; }

ScalarFormField chern_character_form(const MatrixFormField& f) {
  return map_points(f, [](const MatrixPointForm& p) {
    return additive_series(chern_root_form(p), {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0});
  });
}

ScalarFormField todd_form(const MatrixFormField& f) {
  return map_points(f, [](const MatrixPointForm& p) {
    return multiplicative_series(chern_root_form(p), todd_coefficients());
  });
}

ScalarFormField todd_inverse_form(const MatrixFormField& f) {
  // (1 - e^{-x}) / x
  return map_points(f, [](const MatrixPointForm& p) {
    return multiplicative_series(chern_root_form(p), {1.0, -0.5, 1.0 / 6.0, -1.0 / 24.0, 1.0 / 120.0});
  });
}

ScalarFormField a_hat_form(const MatrixFormField& f) {
  return map_points(f, [](const MatrixPointForm& p) {
    return multiplicative_series(chern_root_form(p), a_hat_coefficients());
  });
}

ScalarFormField det_line_c1(const MatrixFormField& f) {
  ScalarFormField out = map_points(f, [](const MatrixPointForm& p) {
    return additive_series(chern_root_form(p), {0.0, 1.0});
  });
  out.max_degree = std::min(2, f.atlas->dimension());
  return out;
}

double trace_form_overlap_defect(const ConnectionData& conn,
                                 const std::function<Complex(const CMatrix&)>& top_of_curvature) {
  const Atlas& at = *conn.atlas;
  double worst = 0.0;
  for (std::size_t a = 0; a < at.patch_count(); ++a) {
    for (std::size_t b = 0; b < at.patch_count(); ++b) {
      if (a == b) continue;
      const auto& ov = at.overlap(a, b);
      for (std::size_t k = 0; k < ov.size(); k += 7) {
        const auto& o = ov[k];
        const Complex wa = top_of_curvature(curvature_at(conn, a, at.node(o.node)));
        const Complex wb = top_of_curvature(curvature_at(conn, b, o.y)) * o.jacobian.determinant();
        worst = std::max(worst, std::abs(wa - wb));
      }
    }
  }
  return worst;
}

ConnectionData tensor_power_connection(const ConnectionData& conn, int n) {
  const int r = conn.rank;
  auto lift = [r, n](const CMatrix& m) {
    int big = 1;
    for (int k = 0; k < n; ++k) big *= r;
    CMatrix out = CMatrix::Zero(big, big);
    for (int slot = 0; slot < n; ++slot) {
      CMatrix term = CMatrix::Identity(1, 1);
      for (int k = 0; k < n; ++k) term = kron(term, k == slot ? m : CMatrix::Identity(r, r));
      out += term;
    }
    return out;
  };
  auto base = conn.eval;
  ConnectionFn fn = [base, lift](std::size_t p, const Coord& x) {
    OneFormValue a = base(p, x);
    for (auto& m : a) m = lift(m);
    return a;
  };
  CurvatureFn over;
  if (conn.has_override()) {
    auto f = conn.analytic_curvature;
    over = [f, lift](std::size_t p, const Coord& x) { return lift(f(p, x)); };
  }
  int big = 1;
  for (int k = 0; k < n; ++k) big *= r;
  return sample_connection(conn.atlas, big, std::move(fn), std::move(over));
}

ConnectionData tensor_connection(const ConnectionData& a, const ConnectionData& b) {
  const int ra = a.rank, rb = b.rank;
  auto ea = a.eval, eb = b.eval;
  ConnectionFn fn = [ea, eb, ra, rb](std::size_t p, const Coord& x) {
    const OneFormValue va = ea(p, x), vb = eb(p, x);
    OneFormValue out(va.size());
    for (std::size_t k = 0; k < va.size(); ++k)
      out[k] = kron(va[k], CMatrix::Identity(rb, rb)) + kron(CMatrix::Identity(ra, ra), vb[k]);
    return out;
  };
  CurvatureFn over;
  if (a.has_override() && b.has_override()) {
    auto fa = a.analytic_curvature, fb = b.analytic_curvature;
    over = [fa, fb, ra, rb](std::size_t p, const Coord& x) {
      return CMatrix(kron(fa(p, x), CMatrix::Identity(rb, rb)) + kron(CMatrix::Identity(ra, ra), fb(p, x)));
    };
  }
  return sample_connection(a.atlas, ra * rb, std::move(fn), std::move(over));
}

}  // namespace gidx
