#pragma once

#include <memory>
#include <vector>

#include "gidx/cohomology.hpp"
#include "gidx/linalg.hpp"
#include "gidx/simplicial_complex.hpp"

namespace gidx {

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

// Cover by open vertex stars of a simplicial base; its nerve is the base.
struct CombinatorialCover {
  ComplexPtr base;

  static CombinatorialCover of(SimplicialComplex x) {
    return {std::make_shared<const SimplicialComplex>(std::move(x))};
  }
  std::size_t set_count() const { return base->count(0); }
  bool same_as(const CombinatorialCover& other) const;
};

struct GerbeTolerances {
  double unitary = 1e-9;
  double scalar = 1e-9;
};

// Special-unitary lift of PU(n) transition data, one matrix per edge (a < b)
// in the base's edge order; G_ba = G_ab^{-1}.
class PULift {
 public:
  PULift(CombinatorialCover cover, int n, std::vector<CMatrix> edge_matrices,
         GerbeTolerances tol = {});

  const CombinatorialCover& cover() const noexcept { return cover_; }
  int n() const noexcept { return n_; }
  const GerbeTolerances& tolerances() const noexcept { return tol_; }
  // Oriented G_ab for any pair forming an edge.
  CMatrix get(int a, int b) const;
  const std::vector<CMatrix>& edge_matrices() const noexcept { return g_; }

 private:
  CombinatorialCover cover_;
  int n_;
  std::vector<CMatrix> g_;
  GerbeTolerances tol_;
};

// Z_n-valued 2-cochain on the nerve; value on sorted triangles, stored in [0, n).
class GerbeCocycle {
 public:
  GerbeCocycle(CombinatorialCover cover, long n, Cochain theta);
  static GerbeCocycle zero(CombinatorialCover cover, long n);

  const CombinatorialCover& cover() const noexcept { return cover_; }
  long n() const noexcept { return n_; }
  const Cochain& values() const noexcept { return theta_; }
  // theta_{abc} for any ordering, antisymmetric under odd permutations.
  long at(int a, int b, int c) const;
  Complex scalar(int a, int b, int c) const { return root_of_unity(at(a, b, c), n_); }
  bool is_cocycle() const;
  bool is_zero() const;
  bool operator==(const GerbeCocycle& o) const;

 private:
  CombinatorialCover cover_;
  long n_;
  Cochain theta_;
};

// theta_abc from G_ab G_bc G_ca = zeta I. Throws NotScalar / NotUnitary.
GerbeCocycle dd_cocycle(const PULift& lift);

struct DDClass {
  long n = 1;
  BocksteinResult bockstein;
  bool is_zero() const { return bockstein.coordinates.is_zero(); }
  Integer order() const { return bockstein.coordinates.order(); }
};

// Throws NotACocycle.
DDClass dd_class(const GerbeCocycle& theta);

// theta + delta mu (mod n) for a Z_n 1-cochain mu.
GerbeCocycle gauge_transform(const GerbeCocycle& theta, const Cochain& mu);

// Multiply every G_ab by zeta^{mu_ab}.
PULift rescale_lift(const PULift& lift, const Cochain& mu);

namespace fixtures {
// Three sets, G_01 = G_12 = I, G_02 = -I in SU(2): theta = 1 mod 2, a coboundary.
PULift three_set_sign_lift();
// Flat PU(2) data on RP^2 x S^1 with G = (i sigma_x)^alpha (i sigma_z)^beta,
// alpha the nontrivial Z2 class of RP^2 and beta that of S^1 (pulled back).
PULift projective_plane_times_circle_lift();
}  // namespace fixtures

}  // namespace gidx
