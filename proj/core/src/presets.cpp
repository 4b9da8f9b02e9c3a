#include "gidx/presets.hpp"

#include <cmath>

#include "gidx/error.hpp"

namespace gidx {

namespace {

// u+ spans the +1 eigenspace of c.sigma; u- = (e1.sigma) u+ is then the -1
// eigenvector and (e2.sigma) u+ = i u-, matching w = x1 + i x2.
std::pair<CVector, CVector> chart_spinors(const SphereChart& chart) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(pauli_dot(chart.center));
  const CVector up = es.eigenvectors().col(1);
  return {up, pauli_dot(chart.e1) * up};
}

CVector frame_from(const std::pair<CVector, CVector>& u, const Coord& x) {
  const Complex w(x(0), x(1));
  return (u.first + w * u.second) / std::sqrt(1.0 + std::norm(w));
}

}  // namespace

CVector spin_frame(const SphereChart& chart, const Coord& x) {
  return frame_from(chart_spinors(chart), x);
}

CVector spin_complement_frame(const SphereChart& chart, const Coord& x) {
  const auto [up, um] = chart_spinors(chart);
  const Complex w(x(0), x(1));
  return (-std::conj(w) * up + um) / std::sqrt(1.0 + std::norm(w));
}

CMatrix spin_projector(const Point& p) {
  return 0.5 * (CMatrix::Identity(2, 2) + pauli_dot(p.head<3>()));
}

ProjectiveBundleData monopole_bundle(const AtlasPtr& atlas, int k) {
  if (atlas->dimension() != 2) {
    throw Error(ErrorCode::IncompatibleAtlas, "chern-weil", "monopole_bundle",
                "needs a sphere atlas");
  }
  std::vector<Transition> q;
  for (const Simplex& e : atlas->cover().base->simplices(1)) {
    const SphereChart ca = atlas->charts()[e[0]];
    const SphereChart cb = atlas->charts()[e[1]];
    const auto ua = chart_spinors(ca);
    const auto ub = chart_spinors(cb);
    q.push_back(Transition::varying([ca, cb, ua, ub, k](const Point& p) {
      const Complex z = std::conj(frame_from(ua, ca.from_sphere(p.head<3>()))
                                      .dot(frame_from(ub, cb.from_sphere(p.head<3>()))));
      CMatrix m(1, 1);
      m(0, 0) = std::pow(z, k);
      return m;
    }));
  }
  return ProjectiveBundleData(GerbeCocycle::zero(atlas->cover(), 1), 1, std::move(q));
}

ConnectionData monopole_connection(const AtlasPtr& atlas, int k, bool analytic_override) {
  ConnectionFn fn = [k](std::size_t, const Coord& x) {
    const double s = 1.0 + x.squaredNorm();
    OneFormValue a(2, CMatrix(1, 1));
    a[0](0, 0) = kI * static_cast<double>(k) * x(1) / s;
    a[1](0, 0) = -kI * static_cast<double>(k) * x(0) / s;
    return a;
  };
  CurvatureFn f;
  if (analytic_override) {
    f = [k](std::size_t, const Coord& x) {
      const double s = 1.0 + x.squaredNorm();
      CMatrix m(1, 1);
      m(0, 0) = -2.0 * kI * static_cast<double>(k) / (s * s);
      return m;
    };
  }
  return sample_connection(atlas, 1, std::move(fn), std::move(f));
}

ProjectiveBundleData central_twist_line(const CombinatorialCover& cover, long n, const Cochain& mu) {
  std::vector<Transition> q;
  for (std::size_t i = 0; i < cover.base->count(1); ++i)
    q.push_back(Transition::fixed(CMatrix::Constant(1, 1, root_of_unity(mu.at(i).get_si(), n))));
  return ProjectiveBundleData(gauge_transform(GerbeCocycle::zero(cover, n), mu), 1, std::move(q));
}

ConnectionData flat_connection(const AtlasPtr& atlas, int rank) {
  ConnectionFn fn = [rank, d = atlas->dimension()](std::size_t, const Coord&) {
    return OneFormValue(d, CMatrix::Zero(rank, rank));
  };
  CurvatureFn f = [rank](std::size_t, const Coord&) { return CMatrix(CMatrix::Zero(rank, rank)); };
  return sample_connection(atlas, rank, std::move(fn), std::move(f));
}

ProjectiveBundleData twist_by_line(const ProjectiveBundleData& e, const ProjectiveBundleData& w) {
  if (!e.twist().is_zero()) {
    throw Error(ErrorCode::TwistMismatch, "projective-bundle", "twist_by_line",
                "first factor must be untwisted");
  }
  if (w.rank() != 1) {
    throw Error(ErrorCode::ShapeMismatch, "projective-bundle", "twist_by_line", "W must have rank 1");
  }
  // W (x) E: the module action with the twisted factor first
  return tensor_ordinary(w, e);
}

}  // namespace gidx
