#pragma once

#include <cstddef>
#include <vector>

#include "gidx/integer_matrix.hpp"
#include "gidx/simplicial_complex.hpp"

namespace gidx {

// Integer k-cochain: one value per k-simplex, in the complex's index order.
using Cochain = IntegerVector;

Cochain coboundary(const SimplicialComplex& x, int k, const Cochain& c);
// Coboundary reduced into [0, n).
Cochain coboundary_mod(const SimplicialComplex& x, int k, const Cochain& c, long n);
Cochain reduce_mod(const Cochain& c, long n);

struct CohomologyGroup {
  int degree = 0;
  std::size_t free_rank = 0;
  IntegerVector torsion;                  // invariant factors > 1, divisibility order
  std::vector<Cochain> torsion_generators;  // one per torsion factor
  std::vector<Cochain> free_generators;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
};

struct ClassCoordinates {
  IntegerVector free;     // integer coefficients against free_generators
  IntegerVector torsion;  // residues in [0, d_i) against torsion_generators
  IntegerVector torsion_orders;

  bool is_zero() const;
  // Order of the class, or 0 if it has infinite order.
  Integer order() const;
};

CohomologyGroup cohomology_group(const SimplicialComplex& x, int k);

// Throws NotACocycle; the returned coordinates are verified by an exact
// solve showing c minus the combination is a coboundary.
ClassCoordinates classify_cocycle(const SimplicialComplex& x, int k, const Cochain& c);

struct BocksteinResult {
  Cochain cocycle;  // integer 3-cocycle (delta t) / n
  ClassCoordinates coordinates;
};

// theta: Z_n-valued 2-cochain (any integer representatives). The lift uses
// representatives in [0, n); `shift` adds n * shift to the lift, which must
// not change the class.
BocksteinResult bockstein(const SimplicialComplex& x, const Cochain& theta, long n,
                          const Cochain* shift = nullptr);

// Z_d-valued (k-1)-cocycle whose Bockstein is the given integral k-cocycle,
// found by solving delta h = d * g. Throws InvalidArgument when d * g is not
// a coboundary.
Cochain bockstein_preimage(const SimplicialComplex& x, int k, const Cochain& g, long d);

}  // namespace gidx
