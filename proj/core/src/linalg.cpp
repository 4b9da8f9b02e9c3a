#include "gidx/linalg.hpp"

#include <cmath>

namespace gidx {

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double unitarity_defect(const CMatrix& m) {
  return spectral_norm(m * m.adjoint() - CMatrix::Identity(m.rows(), m.cols()));
}

Complex root_of_unity(long k, long n) {
  const long r = ((k % n) + n) % n;
  // exact values on the axes keep sign cocycles exact
  if ((4 * r) % n == 0) {
    switch ((4 * r) / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / static_cast<double>(n));
}

CMatrix random_unitary(std::mt19937_64& rng, int n, bool special) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  if (special) {
    const Complex det = q.determinant();
    q *= std::pow(det, -1.0 / n);
  }
  return q;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

CMatrix pauli(int k) {
  CMatrix s(2, 2);
  switch (k) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

CMatrix pauli_dot(const Eigen::Vector3d& v) {
  return v(0) * pauli(1) + v(1) * pauli(2) + v(2) * pauli(3);
}

}  // namespace gidx
