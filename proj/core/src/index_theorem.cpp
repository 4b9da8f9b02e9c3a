#include "gidx/index_theorem.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gidx/error.hpp"
#include "gidx/parallel.hpp"
#include "gidx/presets.hpp"

namespace gidx {

namespace {

constexpr const char* kModule = "index-theorem";

ScalarFormField empty_field(const AtlasPtr& atlas) {
  ScalarFormField f{atlas, atlas->dimension(), {}};
  f.v.assign(atlas->patch_count(),
             std::vector<ScalarPointForm>(atlas->node_count(), ScalarPointForm(atlas->dimension(), 0.0)));
  return f;
}

// Odd Chern transgression of one clutching section at one node:
// {degree-0 coefficient, dx1 dx2 coefficient} before the (-1)^n sign.
std::array<Complex, 2> odd_chern(const FamilySpec& f, std::size_t patch, const Coord& x, int xi,
                                 int samples, double step) {
  const int d = static_cast<int>(x.size());
  Complex deg0 = 0.0, deg2 = 0.0;
  const double dtheta = 2.0 * kPi / samples;
  for (int t = 0; t < samples; ++t) {
    const double theta = t * dtheta;
    const CMatrix s = f.symbol(patch, x, theta, xi);
    const CMatrix sinv = s.inverse();
    const CMatrix at =
        sinv * (f.symbol(patch, x, theta + step, xi) - f.symbol(patch, x, theta - step, xi)) / (2.0 * step);
    deg0 += at.trace();
    if (d == 2) {
      std::array<CMatrix, 2> a;
      for (int k = 0; k < 2; ++k) {
        Coord xp = x, xm = x;
        xp(k) += step;
        xm(k) -= step;
        a[k] = sinv * (f.symbol(patch, xp, theta, xi) - f.symbol(patch, xm, theta, xi)) / (2.0 * step);
      }
      deg2 += 3.0 * ((a[0] * a[1] - a[1] * a[0]) * at).trace();
    }
  }
  const Complex c = 1.0 / (2.0 * kPi * kI);
  return {c * deg0 * dtheta, c * c * deg2 * dtheta / 6.0};
}

}  // namespace

SymbolClass symbol_class(const FamilySpec& f, int theta_samples, const FamilyTolerances& tol) {
  const EllipticReport r = check_elliptic(f, theta_samples, tol);
  if (!r.elliptic) {
    throw Error(ErrorCode::NotElliptic, kModule, "symbol_class",
                "symbol not invertible at patch " + std::to_string(r.patch) + " node " +
                    std::to_string(r.node) + " theta " + std::to_string(r.theta) + " xi " +
                    std::to_string(r.xi) + " (condition " + std::to_string(r.worst_condition) + ")");
  }
  return SymbolClass{std::make_shared<const FamilySpec>(f), theta_samples, r.worst_condition};
}

ScalarFormField topological_index_chern(const SymbolClass& s, double step) {
  if (!s.family) {
    throw Error(ErrorCode::NotCertified, kModule, "topological_index_chern", "symbol class not certified");
  }
  const FamilySpec& f = *s.family;
  const auto& atlas = f.atlas;
  ScalarFormField out = empty_field(atlas);
  const int d = atlas->dimension();
  for (std::size_t a = 0; a < atlas->patch_count(); ++a) {
    parallel_for(atlas->node_count(), [&](std::size_t i) {
      const Coord& x = atlas->node(i);
      const auto plus = odd_chern(f, a, x, +1, s.theta_samples, step);
      const auto minus = odd_chern(f, a, x, -1, s.theta_samples, step);
      // (-1)^n with n = 1 for circle fibers.
      out.v[a][i].c[0] = -(plus[0] - minus[0]);
      if (d == 2) out.v[a][i].c[3] = -(plus[1] - minus[1]);
    });
  }
  return out;
}

std::vector<double> form_integrals(const ScalarFormField& f) {
  std::vector<double> out{f.v.at(0).at(0).c[0].real()};
  if (f.atlas->dimension() == 2) out.push_back(integrate(degree_part(f, 2)).real());
  return out;
}

ScalarFormField dirac_index_chern(const DiracTwist& d, double step) {
  const auto& atlas = d.atlas;
  if (!d.holonomy) {
    throw Error(ErrorCode::NotDiracPreset, kModule, "dirac_index_chern", "no circle holonomy supplied");
  }
  ScalarFormField out = empty_field(atlas);
  const int dim = atlas->dimension();
  const ConnectionData base = monopole_connection(atlas, d.monopole_degree, true);
  const Complex c = kI / (2.0 * kPi);
  constexpr int kTheta = 16;
  for (std::size_t a = 0; a < atlas->patch_count(); ++a) {
    parallel_for(atlas->node_count(), [&](std::size_t i) {
      const Coord& x = atlas->node(i);
      // Forms on base x circle: bits 0..dim-1 for dx, bit dim for dtheta.
      ScalarPointForm fw(dim + 1, 0.0);
      if (dim == 2) fw.c[0b011] = base.analytic_curvature(a, x)(0, 0);
      for (int k = 0; k < dim; ++k) {
        Coord xp = x, xm = x;
        xp(k) += step;
        xm(k) -= step;
        fw.c[(1u << k) | (1u << dim)] = kI * (d.holonomy(a, xp) - d.holonomy(a, xm)) / (2.0 * step);
      }
      // exp((i/2pi) F_W), nilpotent series.
      ScalarPointForm term(dim + 1, 0.0), ch(dim + 1, 0.0);
      term.c[0] = 1.0;
      for (int k = 0; k <= (dim + 1) / 2; ++k) {
        for (std::size_t m = 0; m < ch.c.size(); ++m) ch.c[m] += term.c[m];
        ScalarPointForm scaled = fw;
        for (auto& v : scaled.c) v *= c / static_cast<double>(k + 1);
        term = wedge(term, scaled);
      }
      // Fiber integral over theta (the integrand is theta independent here;
      // the quadrature keeps the shape of the general formula). A-hat = 1.
      const unsigned fiber = 1u << dim;
      for (unsigned m = 0; m < ch.c.size(); ++m) {
        if (!(m & fiber)) continue;
        const unsigned base_mask = m & ~fiber;
        if (form_degree(base_mask) % 2 != 0) continue;  // odd base degrees dropped
        Complex acc = 0.0;
        for (int t = 0; t < kTheta; ++t) acc += ch.c[m] * (2.0 * kPi / kTheta);
        // dx_I ^ dtheta with dtheta last: no reordering sign.
        out.v[a][i].c[base_mask] += acc;
      }
    });
  }
  return out;
}

FamilySpec dirac_symbol_family(const DiracTwist& d, int truncation) {
  if (!d.holonomy) {
    throw Error(ErrorCode::NotDiracPreset, kModule, "dirac_symbol_family", "no circle holonomy supplied");
  }
  const FiberModel fm{truncation, 1, false};
  const int n = fm.dimension();
  const CombinatorialCover& cover = d.atlas->cover();
  auto hol = d.holonomy;
  return FamilySpec{"dirac-twist",
                    d.atlas,
                    fm,
                    [hol, truncation, n](std::size_t p, const Coord& x) {
                      CMatrix m = CMatrix::Zero(n, n);
                      for (int k = -truncation; k <= truncation; ++k)
                        m(k + truncation, k + truncation) = static_cast<double>(k) + hol(p, x);
                      return m;
                    },
                    [](std::size_t, const Coord&, double, int xi) {
                      return CMatrix(CMatrix::Constant(1, 1, static_cast<double>(xi)));
                    },
                    1,
                    trivial_bundle(cover, n),
                    trivial_bundle(cover, n),
                    {},
                    {},
                    trivial_bundle(cover, 1)};
}

// ---------------------------------------------------------------------------
// Thom form of the disc bundle via a Quillen superconnection on
// S+ (+) S- = C (+) E*, odd part c(v) = <., v> / sigma and its adjoint.

namespace {

using M2 = Eigen::Matrix2cd;
// Super form on base x fiber: bits dx1 dx2 du1 du2.
using SuperForm = std::array<M2, 16>;

SuperForm super_zero() {
  SuperForm f;
  for (auto& m : f) m.setZero();
  return f;
}

bool is_zero(const M2& m) { return m.cwiseAbs().maxCoeff() == 0.0; }

// (w1 (x) a)(w2 (x) b) = (-1)^{|a| |w2|} (w1 ^ w2) (x) ab
SuperForm super_mul(const SuperForm& x, const SuperForm& y) {
  SuperForm out = super_zero();
  for (unsigned i = 0; i < 16; ++i) {
    if (is_zero(x[i])) continue;
    M2 even = M2::Zero(), odd = M2::Zero();
    even.diagonal() = x[i].diagonal();
    odd(0, 1) = x[i](0, 1);
    odd(1, 0) = x[i](1, 0);
    for (unsigned j = 0; j < 16; ++j) {
      if (i & j) continue;
      if (is_zero(y[j])) continue;
      const int s = wedge_sign(i, j);
      const M2 left = form_degree(j) % 2 ? M2(even - odd) : x[i];
      out[i | j] += static_cast<double>(s) * left * y[j];
    }
  }
  return out;
}

}  // namespace

ThomReport thom_rr_check(const ThomFixture& fx, double leak_tol) {
  const AtlasPtr atlas = Atlas::sphere_two_patch(fx.base_grid);
  const ConnectionData ce = monopole_connection(atlas, fx.e_degree, true);
  const ConnectionData cf = monopole_connection(atlas, fx.f_degree, true);
  const double radius = 4.0 * fx.sigma;
  const int g = fx.fiber_grid;
  const double h = 2.0 * radius / g;
  const Complex norm = 1.0 / (2.0 * kPi * kI);

  // Ch(thom) components at fiber point w over a base node with E potential
  // (ae1, ae2) and curvature fe.
  auto thom_form = [&fx, norm](Complex ae1, Complex ae2, Complex fe, double u1, double u2) {
    // omega = A + V; A = diag(0, -A_E) on C (+) E*.
    SuperForm om = super_zero();
    om[0b0001](1, 1) = -ae1;
    om[0b0010](1, 1) = -ae2;
    const Complex w(u1, u2);
    om[0](0, 1) = w / fx.sigma;
    om[0](1, 0) = std::conj(w) / fx.sigma;
    // d omega: -F_E on E*, dV along the fiber.
    SuperForm dom = super_zero();
    dom[0b0011](1, 1) = -fe;
    dom[0b0100](0, 1) = 1.0 / fx.sigma;
    dom[0b1000](0, 1) = kI / fx.sigma;
    dom[0b0100](1, 0) = 1.0 / fx.sigma;
    dom[0b1000](1, 0) = -kI / fx.sigma;
    SuperForm r = super_mul(om, om);
    for (unsigned m = 0; m < 16; ++m) r[m] += dom[m];
    // exp(-R) = e^{-R0} sum (-N)^k / k!, R0 = r[0] scalar.
    const Complex r0 = r[0](0, 0);
    SuperForm nn = r;
    nn[0].setZero();
    for (auto& m : nn) m = -m;
    SuperForm term = super_zero(), ex = super_zero();
    term[0] = M2::Identity();
    for (int k = 0; k <= 4; ++k) {
      for (unsigned m = 0; m < 16; ++m) ex[m] += term[m];
      term = super_mul(term, nn);
      for (auto& m : term) m /= static_cast<double>(k + 1);
    }
    const Complex gauss = std::exp(-r0);
    // Ch = sum_k (2 pi i)^{-k} [str exp(-R)]_{2k}
    std::array<Complex, 16> ch{};
    for (unsigned m = 0; m < 16; ++m) {
      const int deg = form_degree(m);
      if (deg % 2) continue;
      ch[m] = gauss * std::pow(norm, deg / 2) * (ex[m](0, 0) - ex[m](1, 1));
    }
    return ch;
  };

  // Total side: fiber integral of Ch(thom) ^ pi* Ch(F), degrees 0 and 2 on
  // the base.
  constexpr int kBoundary = 16;
  ScalarFormField total = empty_field(atlas);
  std::vector<std::vector<double>> leak(atlas->patch_count(), std::vector<double>(atlas->node_count(), 0.0));
  for (std::size_t a = 0; a < atlas->patch_count(); ++a) {
    parallel_for(atlas->node_count(), [&](std::size_t i) {
      if (atlas->pou(a, i) <= 0.0) return;
      const Coord& x = atlas->node(i);
      const Complex ae1 = ce.samples[a][i][0](0, 0), ae2 = ce.samples[a][i][1](0, 0);
      const Complex fe = ce.analytic_curvature(a, x)(0, 0);
      const Complex c1f = kI / (2.0 * kPi) * cf.analytic_curvature(a, x)(0, 0);
      Complex deg0 = 0.0, deg2 = 0.0;
      for (int p = 0; p < g; ++p)
        for (int q = 0; q < g; ++q) {
          const double u1 = -radius + (p + 0.5) * h, u2 = -radius + (q + 0.5) * h;
          if (u1 * u1 + u2 * u2 > radius * radius) continue;
          const auto ch = thom_form(ae1, ae2, fe, u1, u2);
          // ^ pi* Ch(F) = 1 + c1(F)
          deg0 += ch[0b1100] * h * h;
          deg2 += (ch[0b1111] + ch[0b1100] * c1f) * h * h;
        }
      total.v[a][i].c[0] = deg0;
      total.v[a][i].c[3] = deg2;
      for (int t = 0; t < kBoundary; ++t) {
        const double phi = 2.0 * kPi * t / kBoundary;
        for (const Complex& v : thom_form(ae1, ae2, fe, radius * std::cos(phi), radius * std::sin(phi)))
          leak[a][i] = std::max(leak[a][i], std::abs(v));
      }
    });
  }

  ThomReport rep;
  for (const auto& row : leak)
    for (double v : row) rep.support_leak = std::max(rep.support_leak, v);

  // Base side: Td(E)^{-1} Ch(F).
  const ScalarFormField rhs =
      wedge(todd_inverse_form(curvature(ce, true)), chern_character_form(curvature(cf, true)));
  for (std::size_t a = 0; a < atlas->patch_count(); ++a)
    for (std::size_t i = 0; i < atlas->node_count(); ++i)
      if (atlas->pou(a, i) > 0.0)
        rep.degree0_defect =
            std::max(rep.degree0_defect, std::abs(total.v[a][i].c[0] - rhs.v[a][i].c[0]));
  const double i_total = integrate(degree_part(total, 2)).real();
  const double i_base = integrate(degree_part(rhs, 2)).real();
  std::size_t first = 0;
  while (atlas->pou(0, first) <= 0.0) ++first;
  rep.total = total.v[0][first].c[0].real() + i_total;
  rep.base = rhs.v[0][first].c[0].real() + i_base;
  rep.residual = std::max(rep.degree0_defect, std::abs(i_total - i_base));
  if (rep.support_leak > leak_tol) {
    throw Error(ErrorCode::SupportLeak, "chern-weil", "thom_rr_check",
                "Thom form reaches " + std::to_string(rep.support_leak) + " on the disc boundary");
  }
  return rep;
}

}  // namespace gidx
