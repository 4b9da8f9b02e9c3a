#pragma once

#include <cstddef>
#include <vector>

#include "gidx/atlas.hpp"
#include "gidx/linalg.hpp"

namespace gidx {

// Inhomogeneous form at one point in d <= 4 coordinates: coefficient of
// dx_I stored at bitmask I (increasing index order).
template <typename T>
struct PointForm {
  int dim = 0;
  std::vector<T> c;

  PointForm() = default;
  PointForm(int d, const T& zero) : dim(d), c(std::size_t{1} << d, zero) {}
};

// Sign of dx_I ^ dx_J relative to dx_{I|J}; 0 when they share a factor.
int wedge_sign(unsigned i, unsigned j);
int form_degree(unsigned mask);

using ScalarPointForm = PointForm<Complex>;
using MatrixPointForm = PointForm<CMatrix>;

ScalarPointForm wedge(const ScalarPointForm& a, const ScalarPointForm& b);
MatrixPointForm wedge(const MatrixPointForm& a, const MatrixPointForm& b);
ScalarPointForm trace(const MatrixPointForm& a);

// Form samples at every node of every patch of an atlas.
template <typename T>
struct FormField {
  AtlasPtr atlas;
  int max_degree = 0;                         // components above this are zero
  std::vector<std::vector<PointForm<T>>> v;   // [patch][node]
};

using ScalarFormField = FormField<Complex>;
using MatrixFormField = FormField<CMatrix>;

// Component of a given degree as a total over masks of that degree is not
// meaningful in general; these helpers read the top and degree-0 parts.
Complex top_component(const ScalarPointForm& f);

// sum_a sum_i phi_a(i) w_i omega_top(i), patch-major then node order.
// Throws DegreeMismatch when the field has no top-degree part.
Complex integrate(const ScalarFormField& omega);

// Pointwise product of scalar fields and scaling helpers.
ScalarFormField wedge(const ScalarFormField& a, const ScalarFormField& b);
ScalarFormField add(const ScalarFormField& a, const ScalarFormField& b, Complex sb = 1.0);
// Degree-k part only.
ScalarFormField degree_part(const ScalarFormField& a, int k);

}  // namespace gidx
