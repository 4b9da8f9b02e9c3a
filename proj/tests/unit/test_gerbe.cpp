#include <gtest/gtest.h>

#include <random>

#include "../support/oracles.hpp"
#include "gidx/error.hpp"
#include "gidx/gerbe.hpp"

using namespace gidx;

namespace {

Cochain random_zn(std::mt19937_64& rng, std::size_t m, long n) {
  std::uniform_int_distribution<long> d(0, n - 1);
  Cochain c(m);
  for (auto& v : c) v = d(rng);
  return c;
}

// Consistent PU lift G_ab = h_a h_b^{-1} on the vertices of x.
PULift coboundary_lift(std::mt19937_64& rng, const CombinatorialCover& cover, int n) {
  std::vector<CMatrix> h;
  for (std::size_t v = 0; v < cover.set_count(); ++v) h.push_back(random_unitary(rng, n, true));
  std::vector<CMatrix> g;
  for (const auto& e : cover.base->simplices(1)) g.push_back(h[e[0]] * h[e[1]].adjoint());
  return PULift(cover, n, g);
}

}  // namespace

TEST(DDCocycle, IdentityLiftIsZero) {
  auto cover = CombinatorialCover::of(complexes::suspended_projective_plane());
  std::vector<CMatrix> g(cover.base->count(1), CMatrix::Identity(3, 3));
  const auto theta = dd_cocycle(PULift(cover, 3, g));
  EXPECT_TRUE(theta.is_zero());
  EXPECT_TRUE(dd_class(theta).is_zero());
}

TEST(DDCocycle, ThreeSetSignIsCoboundary) {
  const auto theta = dd_cocycle(fixtures::three_set_sign_lift());
  EXPECT_EQ(theta.at(0, 1, 2), 1);
  EXPECT_EQ(theta.at(1, 0, 2), 1);  // -1 = 1 mod 2
  // Exhaustive Z2 oracle: theta lies in the image of delta_0... of delta_1.
  const auto& x = *theta.cover().base;
  EXPECT_TRUE(oracle::in_gf2_span_exhaustive(x.coboundary_matrix(1), {1}));
  EXPECT_TRUE(dd_class(theta).is_zero());
  Cochain mu(3, 0);
  mu[x.require_index({0, 2})] = 1;
  EXPECT_TRUE(gauge_transform(theta, mu).is_zero());
}

TEST(DDCocycle, FlatLiftOnProjectivePlaneTimesCircleHasOrderTwo) {
  const auto lift = fixtures::projective_plane_times_circle_lift();
  const auto theta = dd_cocycle(lift);
  EXPECT_TRUE(theta.is_cocycle());
  const auto cls = dd_class(theta);
  EXPECT_FALSE(cls.is_zero());
  EXPECT_EQ(cls.order(), 2);
}

TEST(DDCocycle, RejectsNonScalarTriple) {
  auto cover = CombinatorialCover::of(complexes::triangle());
  const CMatrix id = CMatrix::Identity(2, 2);
  const CMatrix x = kI * pauli(1);
  try {
    dd_cocycle(PULift(cover, 2, {id, x, id}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotScalar);
    EXPECT_EQ(e.module(), "cech-gerbe");
  }
}

TEST(DDCocycle, RejectsNonUnitary) {
  auto cover = CombinatorialCover::of(complexes::edge());
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 0) = 1.1;
  EXPECT_THROW(PULift(cover, 2, {m}), Error);
}

TEST(DDCocycle, RandomCentralNoiseGivesCocycleOfZeroClass) {
  std::mt19937_64 rng(2024);
  for (const auto& x : {complexes::triangle(), complexes::suspended_projective_plane()}) {
    auto cover = CombinatorialCover::of(x);
    for (int n : {2, 3}) {
      const auto base = coboundary_lift(rng, cover, n);
      const Cochain noise = random_zn(rng, x.count(1), n);
      const auto theta = dd_cocycle(rescale_lift(base, noise));
      EXPECT_TRUE(theta.is_cocycle());
      EXPECT_EQ(theta, gauge_transform(GerbeCocycle::zero(cover, n), noise));
      EXPECT_TRUE(dd_class(theta).is_zero());
    }
  }
}

TEST(DDCocycle, CentralRescalingKeepsClass) {
  std::mt19937_64 rng(8);
  const auto lift = fixtures::projective_plane_times_circle_lift();
  const auto base = dd_class(dd_cocycle(lift));
  for (int trial = 0; trial < 4; ++trial) {
    const Cochain noise = random_zn(rng, lift.cover().base->count(1), 2);
    const auto other = dd_class(dd_cocycle(rescale_lift(lift, noise)));
    EXPECT_EQ(other.bockstein.coordinates.torsion, base.bockstein.coordinates.torsion);
  }
}

TEST(DDCocycle, ReversedOrientationInvertsG) {
  const auto lift = fixtures::projective_plane_times_circle_lift();
  const auto& edges = lift.cover().base->simplices(1);
  for (std::size_t e = 0; e < edges.size(); e += 7) {
    const CMatrix prod = lift.get(edges[e][0], edges[e][1]) * lift.get(edges[e][1], edges[e][0]);
    EXPECT_LT(spectral_norm(prod - CMatrix::Identity(2, 2)), 1e-12);
  }
}

TEST(GaugeTransform, PreservesClassOnBundledComplexes) {
  std::mt19937_64 rng(77);
  const auto lift = fixtures::projective_plane_times_circle_lift();
  const auto theta = dd_cocycle(lift);
  const auto base = dd_class(theta);
  for (int trial = 0; trial < 5; ++trial) {
    const Cochain mu = random_zn(rng, theta.cover().base->count(1), 2);
    const auto shifted = gauge_transform(theta, mu);
    EXPECT_TRUE(shifted.is_cocycle());
    EXPECT_EQ(dd_class(shifted).bockstein.coordinates.torsion, base.bockstein.coordinates.torsion);
  }
  auto cover = CombinatorialCover::of(complexes::suspended_projective_plane());
  const auto zero = GerbeCocycle::zero(cover, 3);
  EXPECT_EQ(gauge_transform(zero, Cochain(cover.base->count(1), 0)), zero);
  for (int trial = 0; trial < 3; ++trial) {
    const auto t = gauge_transform(zero, random_zn(rng, cover.base->count(1), 3));
    EXPECT_TRUE(dd_class(t).is_zero());
  }
}

TEST(DDClass, RejectsNonCocycle) {
  auto cover = CombinatorialCover::of(complexes::suspended_projective_plane());
  Cochain bad(cover.base->count(2), 0);
  bad[0] = 1;
  try {
    dd_class(GerbeCocycle(cover, 2, bad));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotACocycle);
  }
}
