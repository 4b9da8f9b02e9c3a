#include "gidx/gerbe.hpp"

#include <cmath>
#include <sstream>

#include "gidx/error.hpp"

namespace gidx {

namespace {

constexpr const char* kModule = "cech-gerbe";

std::string show(const Simplex& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ')';
  return os.str();
}

}  // namespace

bool CombinatorialCover::same_as(const CombinatorialCover& other) const {
  if (base == other.base) return true;
  if (!base || !other.base) return false;
  if (base->vertex_count() != other.base->vertex_count()) return false;
  if (base->dimension() != other.base->dimension()) return false;
  for (int k = 0; k <= base->dimension(); ++k)
    if (base->simplices(k) != other.base->simplices(k)) return false;
  return true;
}

PULift::PULift(CombinatorialCover cover, int n, std::vector<CMatrix> edge_matrices,
               GerbeTolerances tol)
    : cover_(std::move(cover)), n_(n), g_(std::move(edge_matrices)), tol_(tol) {
  if (g_.size() != cover_.base->count(1)) {
    throw Error(ErrorCode::ShapeMismatch, kModule, "PULift",
                std::to_string(g_.size()) + " matrices for " +
                    std::to_string(cover_.base->count(1)) + " edges");
  }
  const auto& edges = cover_.base->simplices(1);
  for (std::size_t e = 0; e < g_.size(); ++e) {
    if (g_[e].rows() != n_ || g_[e].cols() != n_) {
      throw Error(ErrorCode::ShapeMismatch, kModule, "PULift",
                  "edge " + show(edges[e]) + " matrix is not " + std::to_string(n_) + "x" +
                      std::to_string(n_));
    }
    const double defect = unitarity_defect(g_[e]);
    const double det_err = std::abs(g_[e].determinant() - Complex(1.0));
    if (defect > tol_.unitary || det_err > tol_.unitary) {
      std::ostringstream os;
      os << "edge " << show(edges[e]) << ": ||GG*-I|| = " << defect << ", |det-1| = " << det_err;
      throw Error(ErrorCode::NotUnitary, kModule, "PULift", os.str());
    }
  }
}

CMatrix PULift::get(int a, int b) const {
  if (a < b) return g_[cover_.base->require_index({a, b})];
  return g_[cover_.base->require_index({b, a})].adjoint();
}

GerbeCocycle::GerbeCocycle(CombinatorialCover cover, long n, Cochain theta)
    : cover_(std::move(cover)), n_(n), theta_(std::move(theta)) {
  if (n_ < 1) throw Error(ErrorCode::InvalidArgument, kModule, "GerbeCocycle", "n must be >= 1");
  if (theta_.size() != cover_.base->count(2)) {
    throw Error(ErrorCode::ShapeMismatch, kModule, "GerbeCocycle",
                std::to_string(theta_.size()) + " values for " +
                    std::to_string(cover_.base->count(2)) + " triangles");
  }
  theta_ = reduce_mod(theta_, n_);
}

GerbeCocycle GerbeCocycle::zero(CombinatorialCover cover, long n) {
  const std::size_t m = cover.base->count(2);
  return GerbeCocycle(std::move(cover), n, Cochain(m, 0));
}

long GerbeCocycle::at(int a, int b, int c) const {
  Simplex s{a, b, c};
  const int sign = sort_with_sign(s);
  if (sign == 0) return 0;
  const long v = theta_[cover_.base->require_index(s)].get_si();
  return sign > 0 ? v : (n_ - v) % n_;
}

bool GerbeCocycle::is_cocycle() const {
  for (const auto& v : coboundary_mod(*cover_.base, 2, theta_, n_))
    if (v != 0) return false;
  return true;
}

bool GerbeCocycle::is_zero() const {
  for (const auto& v : theta_)
    if (v != 0) return false;
  return true;
}

bool GerbeCocycle::operator==(const GerbeCocycle& o) const {
  return n_ == o.n_ && cover_.same_as(o.cover_) && theta_ == o.theta_;
}

GerbeCocycle dd_cocycle(const PULift& lift) {
  const auto& x = *lift.cover().base;
  const long n = lift.n();
  const CMatrix id = CMatrix::Identity(n, n);
  Cochain theta(x.count(2), 0);
  const auto& tris = x.simplices(2);
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const int a = tris[t][0], b = tris[t][1], c = tris[t][2];
    const CMatrix p = lift.get(a, b) * lift.get(b, c) * lift.get(c, a);
    const Complex zeta = p.trace() / static_cast<double>(n);
    const double off = spectral_norm(p - zeta * id);
    long k = std::lround(std::arg(zeta) * static_cast<double>(n) / (2.0 * kPi));
    k = ((k % n) + n) % n;
    const double root_err = std::abs(zeta - root_of_unity(k, n));
    if (off > lift.tolerances().scalar || root_err > lift.tolerances().scalar) {
      std::ostringstream os;
      os << "triangle " << show(tris[t]) << ": ||P - zeta I|| = " << off
         << ", distance to nearest root of unity = " << root_err;
      throw Error(ErrorCode::NotScalar, kModule, "dd_cocycle", os.str());
    }
    theta[t] = k;
  }
  return GerbeCocycle(lift.cover(), n, std::move(theta));
}

DDClass dd_class(const GerbeCocycle& theta) {
  DDClass out;
  out.n = theta.n();
  try {
    out.bockstein = bockstein(*theta.cover().base, theta.values(), theta.n());
  } catch (const Error& e) {
    throw Error(e.code(), kModule, "dd_class", e.detail());
  }
  const Integer ord = out.order();
  if (ord == 0 || theta.n() % ord.get_si() != 0) {
    throw Error(ErrorCode::InvalidArgument, kModule, "dd_class",
                "internal: class order does not divide n");
  }
  return out;
}

GerbeCocycle gauge_transform(const GerbeCocycle& theta, const Cochain& mu) {
  const auto& x = *theta.cover().base;
  if (mu.size() != x.count(1)) {
    throw Error(ErrorCode::ShapeMismatch, kModule, "gauge_transform",
                "mu has " + std::to_string(mu.size()) + " values for " +
                    std::to_string(x.count(1)) + " edges");
  }
  const Cochain dmu = coboundary(x, 1, mu);
  Cochain out(theta.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = theta.values()[i] + dmu[i];
  return GerbeCocycle(theta.cover(), theta.n(), std::move(out));
}

PULift rescale_lift(const PULift& lift, const Cochain& mu) {
  std::vector<CMatrix> g = lift.edge_matrices();
  if (mu.size() != g.size()) {
    throw Error(ErrorCode::ShapeMismatch, kModule, "rescale_lift", "mu length mismatch");
  }
  for (std::size_t e = 0; e < g.size(); ++e) g[e] *= root_of_unity(mu[e].get_si(), lift.n());
  return PULift(lift.cover(), lift.n(), std::move(g), lift.tolerances());
}

namespace fixtures {

PULift three_set_sign_lift() {
  auto cover = CombinatorialCover::of(complexes::triangle());
  const CMatrix id = CMatrix::Identity(2, 2);
  // edge order (0,1), (0,2), (1,2)
  return PULift(cover, 2, {id, -id, id});
}

PULift projective_plane_times_circle_lift() {
  const auto rp2 = complexes::projective_plane6();
  const auto h2 = cohomology_group(rp2, 2);
  const Cochain alpha = bockstein_preimage(rp2, 2, h2.torsion_generators.at(0), 2);
  const auto s1 = complexes::circle(3);
  Cochain beta(s1.count(1), 0);
  beta[s1.require_index({0, 1})] = 1;

  auto x = complexes::projective_plane_times_circle();
  const int ny = s1.vertex_count();
  const CMatrix a = kI * pauli(1);
  const CMatrix b = kI * pauli(3);
  std::vector<CMatrix> g;
  for (const Simplex& e : x.simplices(1)) {
    const int i0 = e[0] / ny, j0 = e[0] % ny, i1 = e[1] / ny, j1 = e[1] % ny;
    long pa = 0, pb = 0;
    if (i0 != i1) pa = alpha[rp2.require_index({std::min(i0, i1), std::max(i0, i1)})].get_si();
    if (j0 != j1) pb = beta[s1.require_index({std::min(j0, j1), std::max(j0, j1)})].get_si();
    CMatrix m = CMatrix::Identity(2, 2);
    if (pa) m = m * a;
    if (pb) m = m * b;
    g.push_back(m);
  }
  return PULift(CombinatorialCover::of(std::move(x)), 2, std::move(g));
}

}  // namespace fixtures

}  // namespace gidx
