#pragma once

#include <functional>
#include <vector>

#include "gidx/atlas.hpp"
#include "gidx/forms.hpp"
#include "gidx/projective_bundle.hpp"

namespace gidx {

// Matrix-valued 1-form at a point: one coefficient per chart direction.
using OneFormValue = std::vector<CMatrix>;
using ConnectionFn = std::function<OneFormValue(std::size_t patch, const Coord& x)>;
// Coefficient of dx1 ^ dx2 of a curvature 2-form.
using CurvatureFn = std::function<CMatrix(std::size_t patch, const Coord& x)>;

struct ConnectionData {
  AtlasPtr atlas;
  int rank = 0;
  std::vector<std::vector<OneFormValue>> samples;  // [patch][node]
  ConnectionFn eval;                               // same connection anywhere in a chart
  CurvatureFn analytic_curvature;                  // optional exact override

  bool has_override() const { return static_cast<bool>(analytic_curvature); }
};

struct ChernWeilTolerances {
  double pou = 1e-10;
  double conn = 1e-6;
  double form = 1e-5;
};

// Samples `fn` at every node.
ConnectionData sample_connection(AtlasPtr atlas, int rank, ConnectionFn fn,
                                 CurvatureFn analytic_curvature = {});

// A_a = sum_b phi_b (Q_ab A~_b Q_ab^{-1} + Q_ab d(Q_ab^{-1})), A~_b the raw
// form of patch b pulled back to chart a. Throws IncompatibleAtlas.
ConnectionData average_connection(const ProjectiveBundleData& e, const ConnectionFn& raw,
                                  AtlasPtr atlas);

// max over overlap nodes of || J^T A_b(y) - (Q^{-1} A_a Q + Q^{-1} dQ) ||.
double compatibility_residual(const ProjectiveBundleData& e, const ConnectionData& conn);

// F = dA + A ^ A with dA from grid differences (second order, one-sided at
// the box edges), or the analytic override when present and allowed.
// Throws GridTooCoarse for grids below 3 nodes per side.
MatrixFormField curvature(const ConnectionData& conn, bool use_override = true);

// Curvature coefficient anywhere, by central differences of conn.eval.
CMatrix curvature_at(const ConnectionData& conn, std::size_t patch, const Coord& x,
                     double step = 1e-4);

// max over overlap nodes of || F_b(y) det(dy/dx) - Q^{-1} F_a(x) Q ||, using
// curvature_at on both sides.
double curvature_covariance_defect(const ProjectiveBundleData& e, const ConnectionData& conn);

// Multiplicative series prod f(x_j) evaluated on X = iF/2pi through power
// sums; coeffs = Taylor coefficients of f with f(0) = 1.
ScalarPointForm multiplicative_series(const MatrixPointForm& x, const std::vector<double>& coeffs);
// Additive series sum_j f(x_j) = sum_k c_k tr X^k.
ScalarPointForm additive_series(const MatrixPointForm& x, const std::vector<double>& coeffs);

std::vector<double> todd_coefficients();    // x / (1 - e^{-x})
std::vector<double> a_hat_coefficients();   // (x/2) / sinh(x/2)

MatrixPointForm chern_root_form(const MatrixPointForm& f);  // iF / 2pi

ScalarFormField chern_character_form(const MatrixFormField& f);
ScalarFormField todd_form(const MatrixFormField& f);
ScalarFormField todd_inverse_form(const MatrixFormField& f);
ScalarFormField a_hat_form(const MatrixFormField& f);
// (i / 2pi) tr F
ScalarFormField det_line_c1(const MatrixFormField& f);

// Scalar 2-form coefficient of tr(polynomial) compared across patches.
double trace_form_overlap_defect(const ConnectionData& conn,
                                 const std::function<Complex(const CMatrix&)>& top_of_curvature);

// Connection on E^{(x) n}: sum of A in each tensor slot.
ConnectionData tensor_power_connection(const ConnectionData& conn, int n);
// Connection on E (x) W.
ConnectionData tensor_connection(const ConnectionData& a, const ConnectionData& b);

// Differentiates a matrix field along chart directions by central differences.
std::vector<CMatrix> chart_derivative(const std::function<CMatrix(const Coord&)>& f, const Coord& x,
                                      double step = 1e-5);

}  // namespace gidx
