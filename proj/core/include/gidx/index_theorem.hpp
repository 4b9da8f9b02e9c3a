#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gidx/chern_weil.hpp"
#include "gidx/elliptic_family.hpp"

namespace gidx {

// Clutching data of a circle-fiber family: sigma(., ., +1) and sigma(., ., -1)
// sampled on the theta circle, certified invertible.
struct SymbolClass {
  std::shared_ptr<const FamilySpec> family;
  int theta_samples = 64;
  double worst_condition = 1.0;
};

// Throws NotElliptic with the offending node.
SymbolClass symbol_class(const FamilySpec& f, int theta_samples = 64,
                         const FamilyTolerances& tol = {});

// Fiber integral of the odd Chern character of the clutching data,
// (xi = +1 part) - (xi = -1 part), times (-1)^n with n = 1:
//   degree 0: -(1/2 pi i) int tr(s^{-1} d_theta s) dtheta
//   degree 2: -(1/2 pi i)^2 (1/3!) int 3 tr([a_1, a_2] a_theta) dtheta
// with a = s^{-1} ds from central differences (step in chart units and
// radians). Throws NotCertified for a default-constructed class.
ScalarFormField topological_index_chern(const SymbolClass& s, double step = 1e-5);

// Integrals over the base: [0] = degree-0 value (constant on a connected
// base, read at the first node), [1] = integral of the degree-2 part.
std::vector<double> form_integrals(const ScalarFormField& f);

// Circle Dirac family -i d/dtheta twisted by a line bundle W over base x S^1
// with connection A_base (pulled back) + alpha(b) dtheta.
struct DiracTwist {
  AtlasPtr atlas;
  int monopole_degree = 0;                                   // base part of W
  std::function<double(std::size_t, const Coord&)> holonomy;  // alpha(b)
};

// phi_*(A-hat Ch(W)) with A-hat = 1 for the flat circle: the fiber integral
// of exp((i/2pi) F_W), F_W = F_base + d_b alpha ^ dtheta. Even degrees only.
ScalarFormField dirac_index_chern(const DiracTwist& d, double step = 1e-5);
// Symbol sigma(xi) = xi on W, for the topological pipeline.
FamilySpec dirac_symbol_family(const DiracTwist& d, int truncation = 8);

// Thom / Riemann-Roch check on the disc bundle of a line bundle E over the
// sphere with test bundle F (monopole degrees k_e, k_f).
struct ThomFixture {
  int e_degree = 0;
  int f_degree = 0;
  int base_grid = 32;
  int fiber_grid = 48;
  double sigma = 1.0;  // Gaussian width; the disc radius is 4 sigma
};

struct ThomReport {
  double total = 0.0;        // degree-0 value + integral of degree 2, total side
  double base = 0.0;         // same pairing of Td(E)^{-1} Ch(F)
  double degree0_defect = 0.0;
  double residual = 0.0;     // max(degree0_defect, |integral differences|)
  double support_leak = 0.0;
};

// Throws SupportLeak when the Thom form exceeds `leak_tol` on the disc
// boundary.
ThomReport thom_rr_check(const ThomFixture& fx, double leak_tol = 1e-6);

}  // namespace gidx
