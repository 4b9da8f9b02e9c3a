#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gidx/chern_weil.hpp"
#include "gidx/error.hpp"
#include "gidx/presets.hpp"

using namespace gidx;

namespace {

// Smooth non-compatible local forms; averaging must repair them.
ConnectionFn wobbly_raw(int rank) {
  return [rank](std::size_t patch, const Coord& x) {
    OneFormValue a(2, CMatrix::Zero(rank, rank));
    const double p = static_cast<double>(patch) + 1.0;
    for (int r = 0; r < rank; ++r) {
      a[0](r, r) = kI * std::sin(p * x(0) + r) * 0.3;
      a[1](r, r) = kI * std::cos(x(1) * x(0) + p) * 0.2;
    }
    return a;
  };
}

Complex c1_integral(const ConnectionData& c, bool use_override) {
  return integrate(det_line_c1(curvature(c, use_override)));
}

// Closed form of the Todd class of a sum of two lines with Chern roots x1, x2.
ScalarPointForm todd_two_roots(const ScalarPointForm& x1, const ScalarPointForm& x2) {
  auto one = [](int d) {
    ScalarPointForm f(d, 0.0);
    f.c[0] = 1.0;
    return f;
  };
  auto factor = [&](const ScalarPointForm& x) {
    ScalarPointForm f = one(x.dim);
    const ScalarPointForm x2f = wedge(x, x);
    for (std::size_t i = 0; i < f.c.size(); ++i) f.c[i] += 0.5 * x.c[i] + x2f.c[i] / 12.0;
    return f;
  };
  return wedge(factor(x1), factor(x2));
}

}  // namespace

TEST(Atlas, PartitionOfUnity) {
  for (auto at : {Atlas::sphere_two_patch(32), Atlas::sphere_three_patch(32)})
    EXPECT_LE(at->partition_defect(), 1e-10) << at->description();
}

TEST(Atlas, ChartRoundTrip) {
  auto at = Atlas::sphere_three_patch(16);
  for (std::size_t a = 0; a < at->patch_count(); ++a)
    for (std::size_t i = 0; i < at->node_count(); i += 7) {
      const Point p = at->ambient(a, i);
      EXPECT_NEAR(p.norm(), 1.0, 1e-14);
      EXPECT_LE((at->to_chart(a, p) - at->node(i)).norm(), 1e-12);
    }
}

TEST(Monopole, TransitionsSatisfyCocycle) {
  auto at = Atlas::sphere_three_patch(32);
  auto rep = measure(monopole_bundle(at, 2), at->sampler());
  EXPECT_GT(rep.samples_checked, 0u);
  EXPECT_LE(rep.max_residual, 1e-10);
  EXPECT_LE(rep.max_unitary_defect, 1e-10);
}

TEST(Monopole, AnalyticConnectionIsCompatible) {
  for (auto at : {Atlas::sphere_two_patch(32), Atlas::sphere_three_patch(32)})
    for (int k : {1, -2}) {
      auto e = monopole_bundle(at, k);
      EXPECT_LE(compatibility_residual(e, monopole_connection(at, k)), 1e-6);
    }
}

TEST(Monopole, FirstChernNumberWithOverride) {
  auto at = Atlas::sphere_two_patch(64);
  for (int k : {1, 2, -3}) {
    const Complex c = c1_integral(monopole_connection(at, k), true);
    EXPECT_NEAR(c.real(), k, 1e-6);
    EXPECT_NEAR(c.imag(), 0.0, 1e-12);
  }
}

TEST(Monopole, FiniteDifferenceCurvatureIsSecondOrder) {
  const double e64 =
      std::abs(c1_integral(monopole_connection(Atlas::sphere_two_patch(64), 1), false).real() - 1);
  const double e128 =
      std::abs(c1_integral(monopole_connection(Atlas::sphere_two_patch(128), 1), false).real() - 1);
  EXPECT_GE(e64 / e128, 3.5);
  EXPECT_LE(e64 / e128, 4.5);
}

TEST(Monopole, CurvatureCovariance) {
  auto at = Atlas::sphere_three_patch(16);
  EXPECT_LE(curvature_covariance_defect(monopole_bundle(at, 1), monopole_connection(at, 1)), 1e-6);
}

TEST(AverageConnection, RepairsArbitraryLocalForms) {
  auto at = Atlas::sphere_three_patch(24);
  auto e = monopole_bundle(at, 1);
  auto conn = average_connection(e, wobbly_raw(1), at);
  EXPECT_LE(compatibility_residual(e, conn), 1e-6);
  const Complex c = c1_integral(conn, false);
  EXPECT_NEAR(c.real(), 1.0, 2e-2);
}

TEST(AverageConnection, IdempotentOnCompatibleConnection) {
  auto at = Atlas::sphere_two_patch(24);
  auto e = monopole_bundle(at, 1);
  auto good = monopole_connection(at, 1);
  auto avg = average_connection(e, good.eval, at);
  double worst = 0.0;
  for (std::size_t a = 0; a < at->patch_count(); ++a)
    for (std::size_t i = 0; i < at->node_count(); ++i)
      for (int d = 0; d < 2; ++d)
        worst = std::max(worst, (avg.samples[a][i][d] - good.samples[a][i][d]).norm());
  EXPECT_LE(worst, 1e-8);
}

TEST(AverageConnection, RejectsForeignAtlas) {
  auto e = monopole_bundle(Atlas::sphere_two_patch(8), 1);
  EXPECT_THROW(
      {
        try {
          average_connection(e, wobbly_raw(1), Atlas::sphere_three_patch(8));
        } catch (const Error& err) {
          EXPECT_EQ(err.code(), ErrorCode::IncompatibleAtlas);
          throw;
        }
      },
      Error);
}

TEST(Curvature, CoarseGridRejected) {
  auto at = Atlas::sphere_two_patch(2);
  EXPECT_THROW(curvature(monopole_connection(at, 1, false), false), Error);
}

TEST(Series, ToddMatchesClosedFormInFourDimensions) {
  // Commuting diagonal curvature: Chern roots are the diagonal entries.
  ScalarPointForm x1(4, 0.0), x2(4, 0.0);
  x1.c[0b0011] = Complex(0.7, 0.1);
  x1.c[0b1100] = Complex(-0.4, 0.0);
  x2.c[0b0101] = Complex(0.2, -0.3);
  x2.c[0b1010] = Complex(1.1, 0.5);
  x2.c[0b0011] = Complex(0.3, 0.0);
  MatrixPointForm x(4, CMatrix::Zero(2, 2));
  for (std::size_t m = 0; m < x.c.size(); ++m) {
    x.c[m](0, 0) = x1.c[m];
    x.c[m](1, 1) = x2.c[m];
  }
  const ScalarPointForm got = multiplicative_series(x, todd_coefficients());
  const ScalarPointForm want = todd_two_roots(x1, x2);
  for (std::size_t m = 0; m < got.c.size(); ++m) EXPECT_LE(std::abs(got.c[m] - want.c[m]), 1e-12) << m;
}

TEST(Series, ToddIsInvariantUnderConjugation) {
  MatrixPointForm x(4, CMatrix::Zero(2, 2));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (unsigned m : {0b0011u, 0b0101u, 0b1001u, 0b0110u, 0b1010u, 0b1100u})
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) x.c[m](r, c) = Complex(g(rng), g(rng));
  const CMatrix u = random_unitary(rng, 2);
  MatrixPointForm y = x;
  for (auto& c : y.c) c = u * c * u.adjoint();
  const auto a = multiplicative_series(x, todd_coefficients());
  const auto b = multiplicative_series(y, todd_coefficients());
  for (std::size_t m = 0; m < a.c.size(); ++m) EXPECT_LE(std::abs(a.c[m] - b.c[m]), 1e-12);
}

TEST(Series, AHatCoefficients) {
  const auto a = a_hat_coefficients();
  EXPECT_DOUBLE_EQ(a[2], -1.0 / 24.0);
  EXPECT_DOUBLE_EQ(a[4], 7.0 / 5760.0);
}

TEST(ChernCharacter, TensorPowerOfLineMultipliesDegree) {
  auto at = Atlas::sphere_two_patch(48);
  auto l = monopole_connection(at, 1);
  for (int n : {2, 3}) {
    const Complex ch = integrate(chern_character_form(curvature(tensor_power_connection(l, n), false)));
    EXPECT_NEAR(ch.real(), n, 1e-2);
  }
}

TEST(ChernCharacter, MultiplicativeOnTensorProducts) {
  auto at = Atlas::sphere_two_patch(16);
  auto a = monopole_connection(at, 1, false);
  auto b = tensor_connection(monopole_connection(at, -2, false), flat_connection(at, 2));
  auto ab = tensor_connection(a, b);
  const auto cha = chern_character_form(curvature(a, false));
  const auto chb = chern_character_form(curvature(b, false));
  const auto chab = chern_character_form(curvature(ab, false));
  const auto prod = wedge(cha, chb);
  double worst = 0.0;
  for (std::size_t p = 0; p < chab.v.size(); ++p)
    for (std::size_t i = 0; i < chab.v[p].size(); ++i)
      for (std::size_t m = 0; m < 4; ++m)
        worst = std::max(worst, std::abs(chab.v[p][i].c[m] - prod.v[p][i].c[m]));
  EXPECT_LE(worst, 1e-10);
}

TEST(ChernCharacter, TopDegreeAgreesAcrossPatches) {
  auto at = Atlas::sphere_three_patch(16);
  auto c = monopole_connection(at, 2);
  EXPECT_LE(trace_form_overlap_defect(c, [](const CMatrix& f) { return f.trace(); }), 1e-6);
}
