#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>

namespace gidx {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline const Complex kI{0.0, 1.0};

// Spectral norm of a - b (largest singular value); exact enough for the
// small matrices handled here.
double spectral_norm(const CMatrix& m);
double unitarity_defect(const CMatrix& m);  // ||m m* - I||
Complex root_of_unity(long k, long n);      // e^{2 pi i k / n}

// Haar-distributed unitary; `special` rescales to determinant 1.
CMatrix random_unitary(std::mt19937_64& rng, int n, bool special = false);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix block_diag(const CMatrix& a, const CMatrix& b);

// Pauli matrices and sigma . v.
CMatrix pauli(int k);
CMatrix pauli_dot(const Eigen::Vector3d& v);

}  // namespace gidx
