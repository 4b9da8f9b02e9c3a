#include <gtest/gtest.h>

#include <Eigen/SVD>

#include <cmath>

#include "gidx/elliptic_family.hpp"
#include "gidx/error.hpp"
#include "gidx/index_theorem.hpp"
#include "gidx/parallel.hpp"
#include "gidx/presets.hpp"

using namespace gidx;

namespace {

// dim ker - dim coker of a dense matrix by SVD with an absolute cutoff.
int svd_index(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9) ++rank;
  return static_cast<int>(m.cols() - rank) - static_cast<int>(m.rows() - rank);
}

int svd_cokernel(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-9) ++rank;
  return static_cast<int>(m.rows()) - rank;
}

double c1_of(const FamilySpec& f, const Stabilizer& s) {
  return index_chern_integrals(analytic_index(f, s)).at(1);
}

CMatrix identity_columns(int rows, int n) {
  CMatrix m = CMatrix::Zero(rows, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

}  // namespace

TEST(Winding, AnalyticIndexMatchesSvd) {
  const AtlasPtr pt = Atlas::point();
  for (int m : {-2, -1, 0, 1, 2, 3}) {
    const FamilySpec f = families::winding(pt, m, 8);
    const int oracle = svd_index(f.op(0, pt->node(0)));
    const Stabilizer s = stabilize(f);
    const IndexBundle idx = analytic_index(f, s);
    EXPECT_EQ(idx.cls.virtual_rank(), oracle) << "m = " << m;
    EXPECT_EQ(oracle, -m);
  }
}

TEST(Winding, TopologicalDegreeZeroIsMinusWinding) {
  const AtlasPtr pt = Atlas::point();
  for (int m : {-1, 1, 2}) {
    const auto ints = form_integrals(topological_index_chern(symbol_class(families::winding(pt, m, 8))));
    ASSERT_EQ(ints.size(), 1u);
    EXPECT_NEAR(ints[0], -m, 1e-8);
  }
}

TEST(Identity, NeedsNoStabilizerAndHasIndexZero) {
  const AtlasPtr atlas = Atlas::sphere_two_patch(8);
  const FamilySpec f = families::identity(atlas, 2, 4);
  const Stabilizer s = stabilize(f);
  EXPECT_EQ(s.n, 0);
  const auto ints = index_chern_integrals(analytic_index(f, s));
  EXPECT_EQ(ints[0], 0.0);
  EXPECT_NEAR(ints[1], 0.0, 1e-12);
  const auto top = form_integrals(topological_index_chern(symbol_class(f)));
  EXPECT_NEAR(top[0], 0.0, 1e-12);
  EXPECT_NEAR(top[1], 0.0, 1e-12);
}

TEST(BottToeplitz, PointwiseCokernelIsOne) {
  const AtlasPtr atlas = Atlas::sphere_two_patch(8);
  const FamilySpec f = families::bott_toeplitz(atlas, 4);
  for (std::size_t a = 0; a < atlas->patch_count(); ++a)
    for (std::size_t i = 0; i < atlas->node_count(); i += 7) {
      const CMatrix p = f.op(a, atlas->node(i));
      EXPECT_EQ(svd_cokernel(p), 1);
      EXPECT_EQ(svd_index(p), -1);
    }
  const Stabilizer s = stabilize(f);
  EXPECT_GE(s.n, 1);
  EXPECT_GE(s.min_singular, FamilyTolerances{}.surjectivity_gap);
}

TEST(BottToeplitz, SymbolIsElliptic) {
  const FamilySpec f = families::bott_toeplitz(Atlas::sphere_two_patch(8), 4);
  const EllipticReport r = check_elliptic(f);
  EXPECT_TRUE(r.elliptic);
  EXPECT_NEAR(r.worst_condition, 1.0, 1e-9);  // g_b(z) is unitary on the circle
  EXPECT_LT(check_projective_compat(f), 1e-12);
}

TEST(BottToeplitz, AlignedFramesSpanTheKernel) {
  const AtlasPtr atlas = Atlas::sphere_two_patch(8);
  const FamilySpec f = families::bott_toeplitz(atlas, 4);
  const Stabilizer s = stabilize(f);
  const KernelFrames k(f, s);
  Coord x(2);
  x << 0.3, -0.2;
  for (std::size_t a = 0; a < 2; ++a) {
    const CMatrix kf = k.aligned(a, x);
    ASSERT_EQ(kf.cols(), k.rank());
    CMatrix m(f.target.rank(), f.source.rank() + s.n);
    m << f.op(a, x), s.map;
    EXPECT_LT((m * kf).norm(), 1e-10);
    EXPECT_LT((kf.adjoint() * kf - CMatrix::Identity(k.rank(), k.rank())).norm(), 1e-10);
  }
}

TEST(BottToeplitz, IndexBundleSatisfiesCocycleLaw) {
  const AtlasPtr atlas = Atlas::sphere_three_patch(10);
  const FamilySpec f = families::bott_toeplitz(atlas, 4);
  const IndexBundle idx = analytic_index(f, stabilize(f));
  EXPECT_LT(measure(idx.cls.plus, atlas->sampler()).max_residual, 1e-8);
  EXPECT_EQ(idx.cls.virtual_rank(), -1);
}

TEST(BottToeplitz, ChernIntegralApproachesTopologicalSide) {
  const FamilySpec f = families::bott_toeplitz(Atlas::sphere_two_patch(24), 4);
  const auto top = form_integrals(topological_index_chern(symbol_class(f)));
  const auto ana = index_chern_integrals(analytic_index(f, stabilize(f)));
  EXPECT_NEAR(top[0], -1.0, 1e-9);
  EXPECT_NEAR(top[1], 1.0, 1e-4);
  EXPECT_NEAR(ana[0], top[0], 1e-9);
  EXPECT_NEAR(ana[1], top[1], 1e-2);
}

TEST(BottToeplitz, AdjointNegatesBothSides) {
  const AtlasPtr atlas = Atlas::sphere_two_patch(24);
  const FamilySpec f = families::bott_toeplitz(atlas, 4);
  const FamilySpec g = adjoint_family(f);
  const auto tf = form_integrals(topological_index_chern(symbol_class(f)));
  const auto tg = form_integrals(topological_index_chern(symbol_class(g)));
  EXPECT_NEAR(tg[0], -tf[0], 1e-9);
  EXPECT_NEAR(tg[1], -tf[1], 1e-6);
  const auto af = index_chern_integrals(analytic_index(f, stabilize(f)));
  const auto ag = index_chern_integrals(analytic_index(g, stabilize(g)));
  EXPECT_EQ(ag[0], -af[0]);
  EXPECT_NEAR(ag[1], -af[1], 1e-2);
}

TEST(BottToeplitz, SumWithAdjointHasIndexZero) {
  const AtlasPtr atlas = Atlas::sphere_two_patch(16);
  const FamilySpec f = families::bott_toeplitz(atlas, 3);
  const FamilySpec sum = direct_sum_family(f, adjoint_family(f));
  const auto top = form_integrals(topological_index_chern(symbol_class(sum)));
  EXPECT_NEAR(top[0], 0.0, 1e-9);
  EXPECT_NEAR(top[1], 0.0, 1e-6);
  const auto ana = index_chern_integrals(analytic_index(sum, stabilize(sum)));
  EXPECT_EQ(ana[0], 0.0);
  EXPECT_NEAR(ana[1], 0.0, 2e-2);
}

TEST(Stabilizer, HomotopicMapsGiveTheSameChernIntegral) {
  const FamilySpec f = families::bott_toeplitz(Atlas::sphere_two_patch(16), 4);
  const int rows = f.target.rank();
  const CMatrix a = identity_columns(rows, 2);
  CMatrix b = CMatrix::Zero(rows, 2);
  b(0, 0) = 1.0;
  b(3, 0) = 0.5;
  b(1, 1) = 1.0;
  b(2, 1) = -0.3;
  const double ref = c1_of(f, check_stabilizer(f, a));
  for (double t : {0.25, 0.5, 1.0}) {
    const Stabilizer s = check_stabilizer(f, (1.0 - t) * a + t * b);
    EXPECT_NEAR(c1_of(f, s), ref, 1e-3) << "t = " << t;
  }
  // A larger stabilizer adds a trivial summand.
  EXPECT_NEAR(c1_of(f, check_stabilizer(f, identity_columns(rows, 3))), ref, 1e-10);
}

TEST(Stabilizer, RejectsDegenerateMap) {
  const FamilySpec f = families::bott_toeplitz(Atlas::sphere_two_patch(8), 4);
  const CMatrix zero = CMatrix::Zero(f.target.rank(), 2);
  try {
    check_stabilizer(f, zero);
    FAIL() << "expected StabilizationFailed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StabilizationFailed);
  }
}

TEST(Compatibility, DetectsMismatchedTwist) {
  const AtlasPtr atlas = Atlas::sphere_three_patch(8);
  FamilySpec f = families::bott_toeplitz(atlas, 3, 3);
  const Cochain mu{Integer(1), Integer(0), Integer(0)};
  EXPECT_LT(check_projective_compat(gauge_family(f, mu)), 1e-12);
  f.target = gauge_rescale(f.target, mu);  // source left alone
  EXPECT_GT(check_projective_compat(f), 0.5);
}

TEST(Gauge, IndexIntegralsInvariant) {
  const AtlasPtr atlas = Atlas::sphere_three_patch(12);
  const FamilySpec f = families::bott_toeplitz(atlas, 3, 3);
  const Cochain mu{Integer(2), Integer(1), Integer(0)};
  const FamilySpec g = gauge_family(f, mu);
  const IndexBundle ig = analytic_index(g, stabilize(g));
  EXPECT_FALSE(ig.cls.plus.twist().is_zero());
  EXPECT_LT(measure(ig.cls.plus, atlas->sampler()).max_residual, 1e-8);
  EXPECT_NEAR(index_chern_integrals(ig)[1], c1_of(f, stabilize(f)), 1e-10);
}

TEST(Twist, FamilyTwistRequiresUntwistedInput) {
  const AtlasPtr atlas = Atlas::sphere_three_patch(8);
  const Cochain mu{Integer(1), Integer(0), Integer(0)};
  const FamilySpec f = families::bott_toeplitz(atlas, 3);
  const auto line = central_twist_line(atlas->cover(), 3, mu);
  const FamilySpec t = twist_family(f, line);
  EXPECT_EQ(t.source.twist(), line.twist());
  EXPECT_THROW(twist_family(t, line), Error);
}

TEST(Symbol, NonInvertibleSymbolIsReported) {
  FamilySpec f = families::winding(Atlas::point(), 1, 4);
  f.symbol = [](std::size_t, const Coord&, double theta, int) {
    return CMatrix(CMatrix::Constant(1, 1, std::sin(theta)));
  };
  try {
    symbol_class(f, 16);
    FAIL() << "expected NotElliptic";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotElliptic);
    EXPECT_NE(std::string(e.what()).find("node"), std::string::npos);
  }
  EXPECT_THROW(topological_index_chern(SymbolClass{}), Error);
}

TEST(Determinism, RepeatedRunsAreBitIdentical) {
  set_thread_count(1);
  const FamilySpec f = families::bott_toeplitz(Atlas::sphere_two_patch(12), 3);
  const double a = c1_of(f, stabilize(f));
  const double b = c1_of(f, stabilize(f));
  EXPECT_EQ(a, b);
  set_thread_count(0);
}
