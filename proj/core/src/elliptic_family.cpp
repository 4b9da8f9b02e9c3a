#include "gidx/elliptic_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gidx/error.hpp"
#include "gidx/parallel.hpp"
#include "gidx/presets.hpp"

namespace gidx {

namespace {

constexpr const char* kModule = "elliptic-family";

std::string at_node(std::size_t patch, std::size_t node) {
  return "patch " + std::to_string(patch) + " node " + std::to_string(node);
}

CMatrix invert(const ProjectiveBundleData& e, const CMatrix& q) {
  return e.hermitian() ? CMatrix(q.adjoint()) : CMatrix(q.inverse());
}

// Smallest singular value of a wide (or square) matrix via M M*.
double min_singular_wide(const CMatrix& m) {
  if (m.rows() == 0) return std::numeric_limits<double>::infinity();
  if (m.cols() < m.rows()) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m * m.adjoint(), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(0)));
}

CMatrix augmented(const FamilySpec& f, std::size_t patch, const Coord& x, const CMatrix& map) {
  const CMatrix p = f.op(patch, x);
  CMatrix m(p.rows(), p.cols() + map.cols());
  m << p, map;
  return m;
}

CMatrix first_columns(int rows, int n) {
  CMatrix m = CMatrix::Zero(rows, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

OneFormValue connection_or_zero(const ConnectionFn& fn, std::size_t patch, const Coord& x, int rank) {
  if (fn) return fn(patch, x);
  return OneFormValue(static_cast<std::size_t>(x.size()), CMatrix::Zero(rank, rank));
}

ProjectiveBundleData stabilizer_bundle(const FamilySpec& f, int n) {
  std::vector<Transition> q;
  for (const Transition& t : f.stabilizer_line.transitions()) {
    if (t.is_constant()) {
      q.push_back(Transition::fixed((*t.constant)(0, 0) * CMatrix::Identity(n, n)));
    } else {
      q.push_back(Transition::varying(
          [t, n](const Point& p) { return CMatrix(t.at(p)(0, 0) * CMatrix::Identity(n, n)); }));
    }
  }
  return ProjectiveBundleData(f.stabilizer_line.twist(), n, std::move(q));
}

double scan_min_singular(const FamilySpec& f, const CMatrix& map, std::size_t* worst_patch,
                         std::size_t* worst_node) {
  const auto& atlas = f.atlas;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < atlas->patch_count(); ++a) {
    std::vector<double> s(atlas->node_count());
    parallel_for(s.size(), [&](std::size_t i) {
      s[i] = atlas->pou(a, i) > 0.0 ? min_singular_wide(augmented(f, a, atlas->node(i), map))
                                    : std::numeric_limits<double>::infinity();
    });
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < best) {
        best = s[i];
        if (worst_patch) *worst_patch = a;
        if (worst_node) *worst_node = i;
      }
    }
    // Chart origins anchor the kernel frames; they are not grid nodes.
    const double o = min_singular_wide(augmented(f, a, Coord::Zero(atlas->dimension()), map));
    if (o < best) {
      best = o;
      if (worst_patch) *worst_patch = a;
      if (worst_node) *worst_node = atlas->node_count();
    }
  }
  return best;
}

}  // namespace

EllipticReport check_elliptic(const FamilySpec& f, int theta_samples, const FamilyTolerances& tol) {
  EllipticReport r;
  const auto& atlas = f.atlas;
  std::vector<EllipticReport> per;
  for (std::size_t a = 0; a < atlas->patch_count(); ++a) {
    per.assign(atlas->node_count(), EllipticReport{});
    parallel_for(atlas->node_count(), [&](std::size_t i) {
      EllipticReport& w = per[i];
      w.patch = a;
      w.node = i;
      for (int xi : {1, -1})
        for (int t = 0; t < theta_samples; ++t) {
          const double theta = 2.0 * kPi * t / theta_samples;
          const CMatrix s = f.symbol(a, atlas->node(i), theta, xi);
          Eigen::JacobiSVD<CMatrix> svd(s);
          const auto& sv = svd.singularValues();
          const double smin = sv(sv.size() - 1);
          const double cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
          if (!std::isfinite(cond) || cond > w.worst_condition) {
            w.worst_condition = cond;
            w.theta = theta;
            w.xi = xi;
          }
        }
    });
    for (const auto& w : per)
      if (!(w.worst_condition <= r.worst_condition)) r = w;
  }
  r.elliptic = std::isfinite(r.worst_condition) && r.worst_condition < tol.kappa_max;
  return r;
}

double check_projective_compat(const FamilySpec& f) {
  const auto& atlas = f.atlas;
  if (!f.source.cover().same_as(atlas->cover()) || !f.target.cover().same_as(atlas->cover())) {
    throw Error(ErrorCode::CoverMismatch, kModule, "check_projective_compat",
                "family bundles are not over the atlas cover");
  }
  double worst = 0.0;
  for (const Simplex& e : atlas->cover().base->simplices(1)) {
    const auto& ov = atlas->overlap(e[0], e[1]);
    std::vector<double> r(ov.size());
    parallel_for(ov.size(), [&](std::size_t k) {
      const auto& o = ov[k];
      const Point& p = atlas->ambient(e[0], o.node);
      const CMatrix qp = f.source.get(e[0], e[1], p);
      const CMatrix qm = f.target.get(e[0], e[1], p);
      const CMatrix lhs = qm * f.op(e[1], o.y) * invert(f.source, qp);
      r[k] = (lhs - f.op(e[0], atlas->node(o.node))).norm();
    });
    for (double v : r) worst = std::max(worst, v);
  }
  return worst;
}

namespace {

// Throws StabilizationFailed when the map does not intertwine the target
// transitions with the stabilizer line.
void check_intertwines(const FamilySpec& f, const CMatrix& map, const FamilyTolerances& tol) {
  const auto& atlas = f.atlas;
  for (const Simplex& e : atlas->cover().base->simplices(1)) {
    for (const auto& o : atlas->overlap(e[0], e[1])) {
      const Point& p = atlas->ambient(e[0], o.node);
      const CMatrix lhs = f.target.get(e[0], e[1], p) * map;
      const CMatrix rhs = map * f.stabilizer_line.get(e[0], e[1], p)(0, 0);
      if ((lhs - rhs).norm() > tol.compat) {
        throw Error(ErrorCode::StabilizationFailed, kModule, "check_stabilizer",
                    "map does not intertwine the target transitions on edge (" +
                        std::to_string(e[0]) + "," + std::to_string(e[1]) + ")");
      }
    }
  }
}

}  // namespace

Stabilizer check_stabilizer(const FamilySpec& f, const CMatrix& map, const FamilyTolerances& tol) {
  const int target = f.target.rank();
  if (map.rows() != target) {
    throw Error(ErrorCode::ShapeMismatch, kModule, "check_stabilizer",
                "stabilizer map has " + std::to_string(map.rows()) + " rows, target dimension " +
                    std::to_string(target));
  }
  check_intertwines(f, map, tol);
  Stabilizer s{static_cast<int>(map.cols()), map, 0.0};
  std::size_t wp = 0, wn = 0;
  s.min_singular = scan_min_singular(f, map, &wp, &wn);
  if (s.min_singular < tol.surjectivity_gap) {
    throw Error(ErrorCode::StabilizationFailed, kModule, "check_stabilizer",
                "P + f not surjective at " + at_node(wp, wn) +
                    " (smallest singular value " + std::to_string(s.min_singular) + ")");
  }
  return s;
}

Stabilizer stabilize(const FamilySpec& f, const FamilyTolerances& tol) {
  const auto& atlas = f.atlas;
  const int target = f.target.rank();
  // Numerical cokernel: singular values of P below the surjectivity gap.
  int start = 0;
  for (std::size_t a = 0; a < atlas->patch_count(); ++a) {
    std::vector<int> c(atlas->node_count(), 0);
    parallel_for(c.size(), [&](std::size_t i) {
      if (atlas->pou(a, i) <= 0.0) return;
      const CMatrix p = f.op(a, atlas->node(i));
      Eigen::SelfAdjointEigenSolver<CMatrix> es(p * p.adjoint(), Eigen::EigenvaluesOnly);
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        if (std::sqrt(std::max(0.0, es.eigenvalues()(k))) < tol.surjectivity_gap) ++c[i];
    });
    start = std::max(start, *std::max_element(c.begin(), c.end()));
  }
  for (int n = start; n <= std::min(tol.max_stabilizer, target); ++n) {
    const CMatrix map = first_columns(target, n);
    check_intertwines(f, map, tol);
    const double s = scan_min_singular(f, map, nullptr, nullptr);
    if (s >= tol.surjectivity_gap) return Stabilizer{n, map, s};
  }
  throw Error(ErrorCode::StabilizationFailed, kModule, "stabilize",
              "no stabilizer with N <= " + std::to_string(tol.max_stabilizer));
}

KernelFrames::KernelFrames(FamilySpec f, Stabilizer s, const FamilyTolerances& tol)
    : f_(std::make_shared<const FamilySpec>(std::move(f))), s_(std::move(s)), tol_(tol) {
  rank_ = f_->source.rank() + s_.n - f_->target.rank();
  if (rank_ < 0) {
    throw Error(ErrorCode::StabilizationFailed, kModule, "analytic_index",
                "P + f cannot be surjective: domain smaller than target");
  }
  const Coord origin = Coord::Zero(f_->atlas->dimension());
  for (std::size_t a = 0; a < f_->atlas->patch_count(); ++a) reference_.push_back(raw(a, origin));
}

CMatrix KernelFrames::raw(std::size_t patch, const Coord& x) const {
  const CMatrix m = augmented(*f_, patch, x, s_.map);
  const Eigen::Index n = m.cols();
  Eigen::ColPivHouseholderQR<CMatrix> qr(m.adjoint());
  qr.setThreshold(tol_.kernel_relative);
  const Eigen::Index r = qr.rank();
  if (n - r != rank_) {
    throw Error(ErrorCode::NonConstantKernel, kModule, "analytic_index",
                "kernel dimension " + std::to_string(n - r) + " instead of " +
                    std::to_string(rank_) + " in patch " + std::to_string(patch));
  }
  const CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  return q.rightCols(rank_);
}

CMatrix KernelFrames::aligned(std::size_t patch, const Coord& x) const {
  const CMatrix& r = reference_[patch];
  if (rank_ == 0) return r;
  // Procrustes alignment K polar(K* R) depends only on the kernel projector
  // P = 1 - M* (M M*)^{-1} M, so it equals P R (R* P R)^{-1/2}.
  const CMatrix m = augmented(*f_, patch, x, s_.map);
  Eigen::LLT<CMatrix> llt(m * m.adjoint());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConstantKernel, kModule, "analytic_index",
                "P + f not surjective in patch " + std::to_string(patch));
  }
  const CMatrix pr = r - m.adjoint() * llt.solve(m * r);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r.adjoint() * pr);
  if (es.eigenvalues()(0) < tol_.frame_gram * tol_.frame_gram) {
    throw Error(ErrorCode::FrameDegeneracy, kModule, "analytic_index",
                "kernel frame nearly orthogonal to the reference in patch " + std::to_string(patch));
  }
  return pr * es.operatorInverseSqrt();
}

OneFormValue KernelFrames::frame_connection(std::size_t patch, const Coord& x, double step) const {
  OneFormValue out(static_cast<std::size_t>(x.size()), CMatrix::Zero(rank_, rank_));
  if (rank_ == 0) return out;
  const CMatrix& r = reference_[patch];
  const CMatrix m = augmented(*f_, patch, x, s_.map);
  Eigen::LLT<CMatrix> llt(m * m.adjoint());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NonConstantKernel, kModule, "berry_connection",
                "P + f not surjective in patch " + std::to_string(patch));
  }
  const CMatrix y = llt.solve(m * r);
  const CMatrix pr = r - m.adjoint() * y;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r.adjoint() * pr);
  const Eigen::VectorXd lam = es.eigenvalues();
  if (lam(0) < tol_.frame_gram * tol_.frame_gram) {
    throw Error(ErrorCode::FrameDegeneracy, kModule, "berry_connection",
                "kernel frame nearly orthogonal to the reference in patch " + std::to_string(patch));
  }
  const CMatrix& v = es.eigenvectors();
  const CMatrix s_inv_half = es.operatorInverseSqrt();
  const CMatrix s_half = es.operatorSqrt();
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    Coord xp = x, xm = x;
    xp(d) += step;
    xm(d) -= step;
    const CMatrix dm = (augmented(*f_, patch, xp, s_.map) - augmented(*f_, patch, xm, s_.map)) / (2.0 * step);
    // X = R* P dP R; dS = X + X*.
    const CMatrix xx = -pr.adjoint() * dm.adjoint() * y;
    const CMatrix ds = v.adjoint() * (xx + xx.adjoint()) * v;
    // d(S^{-1/2}) by divided differences in the eigenbasis of S.
    CMatrix dsi(rank_, rank_);
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j) {
        const double li = lam(i), lj = lam(j);
        const double dd = std::abs(li - lj) < 1e-12 * (li + lj)
                              ? -0.5 * std::pow(li, -1.5)
                              : (1.0 / std::sqrt(li) - 1.0 / std::sqrt(lj)) / (li - lj);
        dsi(i, j) = ds(i, j) * dd;
      }
    out[d] = s_inv_half * xx * s_inv_half + s_half * (v * dsi * v.adjoint());
  }
  return out;
}

ConnectionData berry_connection(const FamilySpec& f, const Stabilizer& s, double step,
                                const FamilyTolerances& tol) {
  const auto& atlas = f.atlas;
  if (atlas->dimension() > 0 && atlas->grid() < 3) {
    throw Error(ErrorCode::GridTooCoarse, kModule, "berry_connection", "grid below 3 nodes per side");
  }
  auto kf = std::make_shared<const KernelFrames>(f, s, tol);
  const int rank = kf->rank();
  const int domain = f.source.rank();
  const int n = s.n;
  ConnectionFn src = f.source_connection;
  ConnectionFn fn = [kf, src, rank, domain, n, step](std::size_t patch, const Coord& x) {
    if (rank == 0) return OneFormValue(static_cast<std::size_t>(x.size()), CMatrix(0, 0));
    OneFormValue a = kf->frame_connection(patch, x, step);
    if (src) {
      const CMatrix k = kf->aligned(patch, x);
      const OneFormValue as = src(patch, x);
      for (std::size_t d = 0; d < a.size(); ++d)
        a[d] += k.topRows(domain).adjoint() * as[d] * k.topRows(domain);
    }
    return a;
  };
  return sample_connection(atlas, rank, std::move(fn));
}

IndexBundle analytic_index(const FamilySpec& f, const Stabilizer& s, const FamilyTolerances& tol) {
  const auto& atlas = f.atlas;
  auto kf = std::make_shared<const KernelFrames>(f, s, tol);
  const int rank = kf->rank();
  std::vector<std::vector<CMatrix>> frames(atlas->patch_count());
  for (std::size_t a = 0; a < atlas->patch_count(); ++a) {
    frames[a].resize(atlas->node_count());
    parallel_for(atlas->node_count(),
                 [&](std::size_t i) {
                   kf->raw(a, atlas->node(i));
                   frames[a][i] = kf->aligned(a, atlas->node(i));
                 });
  }

  const ProjectiveBundleData stab = stabilizer_bundle(f, s.n);
  std::vector<Transition> q;
  const int domain = f.source.rank();
  for (const Simplex& e : atlas->cover().base->simplices(1)) {
    const std::size_t a = e[0], b = e[1];
    const ProjectiveBundleData src = f.source;
    q.push_back(Transition::varying([kf, src, stab, atlas, a, b, domain, n = s.n](const Point& p) {
      CMatrix aug = CMatrix::Zero(domain + n, domain + n);
      aug.topLeftCorner(domain, domain) = src.get(a, b, p);
      if (n > 0) aug.bottomRightCorner(n, n) = stab.get(a, b, p);
      return CMatrix(kf->aligned(a, atlas->to_chart(a, p)).adjoint() * aug *
                     kf->aligned(b, atlas->to_chart(b, p)));
    }));
  }
  ProjectiveBundleData kernel(f.source.twist(), rank, std::move(q));
  validate(kernel, atlas->sampler());
  IndexBundle idx{KClassDifference(kernel, stab), s, std::move(frames),
                  berry_connection(f, s, 1e-5, tol), s.min_singular};
  return idx;
}

std::vector<double> index_chern_integrals(const IndexBundle& idx, bool use_override) {
  std::vector<double> out{static_cast<double>(idx.cls.virtual_rank())};
  if (idx.berry.atlas->dimension() == 2) {
    out.push_back(idx.kernel_rank() == 0
                      ? 0.0
                      : integrate(det_line_c1(curvature(idx.berry, use_override))).real());
  }
  return out;
}

FamilySpec direct_sum_family(const FamilySpec& a, const FamilySpec& b) {
  if (a.atlas != b.atlas) {
    throw Error(ErrorCode::IncompatibleAtlas, kModule, "direct_sum_family", "atlases differ");
  }
  FamilySpec s{a.name + "+" + b.name,
               a.atlas,
               a.fiber,
               {},
               {},
               a.symbol_rank + b.symbol_rank,
               direct_sum(a.source, b.source),
               direct_sum(a.target, b.target),
               {},
               {},
               a.stabilizer_line};
  s.op = [fa = a.op, fb = b.op](std::size_t p, const Coord& x) { return block_diag(fa(p, x), fb(p, x)); };
  s.symbol = [sa = a.symbol, sb = b.symbol](std::size_t p, const Coord& x, double t, int xi) {
    return block_diag(sa(p, x, t, xi), sb(p, x, t, xi));
  };
  auto sum_conn = [](ConnectionFn ca, int ra, ConnectionFn cb, int rb) -> ConnectionFn {
    if (!ca && !cb) return {};
    return [ca, ra, cb, rb](std::size_t p, const Coord& x) {
      const OneFormValue u = connection_or_zero(ca, p, x, ra);
      const OneFormValue v = connection_or_zero(cb, p, x, rb);
      OneFormValue out;
      for (std::size_t d = 0; d < u.size(); ++d) out.push_back(block_diag(u[d], v[d]));
      return out;
    };
  };
  s.source_connection = sum_conn(a.source_connection, a.source.rank(), b.source_connection, b.source.rank());
  s.target_connection = sum_conn(a.target_connection, a.target.rank(), b.target_connection, b.target.rank());
  return s;
}

FamilySpec adjoint_family(const FamilySpec& a) {
  FamilySpec s = a;
  s.name = a.name + "*";
  s.op = [fa = a.op](std::size_t p, const Coord& x) { return CMatrix(fa(p, x).adjoint()); };
  s.symbol = [sa = a.symbol](std::size_t p, const Coord& x, double t, int xi) {
    return CMatrix(sa(p, x, t, xi).adjoint());
  };
  std::swap(s.source, s.target);
  std::swap(s.source_connection, s.target_connection);
  return s;
}

FamilySpec twist_family(const FamilySpec& a, const ProjectiveBundleData& line) {
  FamilySpec s = a;
  s.name = a.name + "-twisted";
  s.source = twist_by_line(a.source, line);
  s.target = twist_by_line(a.target, line);
  s.stabilizer_line = twist_by_line(a.stabilizer_line, line);
  return s;
}

FamilySpec gauge_family(const FamilySpec& a, const Cochain& mu) {
  FamilySpec s = a;
  s.source = gauge_rescale(a.source, mu);
  s.target = gauge_rescale(a.target, mu);
  s.stabilizer_line = gauge_rescale(a.stabilizer_line, mu);
  return s;
}

namespace families {

FamilySpec bott_toeplitz(AtlasPtr atlas, int truncation, long n) {
  const int k = truncation;
  const int domain = 2 * k + 1;
  const int target = 2 * k + 2;
  const CombinatorialCover& cover = atlas->cover();
  const std::vector<SphereChart> charts = atlas->charts();

  OperatorFn op = [atlas, charts, k, domain, target](std::size_t patch, const Coord& x) {
    const CMatrix pr = spin_projector(atlas->to_ambient(patch, x));
    const CMatrix co = CMatrix::Identity(2, 2) - pr;
    CMatrix m = CMatrix::Zero(target, domain);
    for (int mode = 0; mode < k; ++mode)
      for (int c = 0; c < 2; ++c) {
        m.block(2 * (mode + 1), 2 * mode + c, 2, 1) = pr.col(c);
        m.block(2 * mode, 2 * mode + c, 2, 1) = co.col(c);
      }
    m.block(2 * k, domain - 1, 2, 1) = spin_complement_frame(charts[patch], x);
    return m;
  };
  SymbolFn symbol = [atlas](std::size_t patch, const Coord& x, double theta, int xi) {
    if (xi < 0) return CMatrix(CMatrix::Identity(2, 2));
    const CMatrix pr = spin_projector(atlas->to_ambient(patch, x));
    return CMatrix(std::polar(1.0, theta) * pr + (CMatrix::Identity(2, 2) - pr));
  };

  std::vector<Transition> qs;
  for (const Simplex& e : cover.base->simplices(1)) {
    const SphereChart ca = charts[e[0]], cb = charts[e[1]];
    qs.push_back(Transition::varying([ca, cb, domain](const Point& p) {
      CMatrix q = CMatrix::Identity(domain, domain);
      const Eigen::Vector3d v = p.head<3>();
      q(domain - 1, domain - 1) =
          spin_complement_frame(ca, ca.from_sphere(v)).dot(spin_complement_frame(cb, cb.from_sphere(v)));
      return q;
    }));
  }
  ConnectionFn src = [charts, domain](std::size_t patch, const Coord& x) {
    const SphereChart c = charts[patch];
    const CVector t = spin_complement_frame(c, x);
    const auto dt = chart_derivative(
        [&c](const Coord& y) { return CMatrix(spin_complement_frame(c, y)); }, x);
    OneFormValue a;
    for (const auto& d : dt) {
      CMatrix m = CMatrix::Zero(domain, domain);
      m(domain - 1, domain - 1) = t.dot(d.col(0));
      a.push_back(m);
    }
    return a;
  };

  FamilySpec f{"bott-toeplitz",
               atlas,
               FiberModel{k, 2, true},
               std::move(op),
               std::move(symbol),
               2,
               ProjectiveBundleData(GerbeCocycle::zero(cover, n), domain, std::move(qs)),
               trivial_bundle(cover, target, n),
               std::move(src),
               {},
               trivial_bundle(cover, 1, n)};
  return f;
}

FamilySpec winding(AtlasPtr atlas, int m, int truncation) {
  const int k = truncation;
  const int domain = m >= 0 ? k + 1 - m : k + 1;
  const int target = m >= 0 ? k + 1 : k + 1 + m;
  if (domain <= 0 || target <= 0) {
    throw Error(ErrorCode::InvalidArgument, kModule, "winding", "truncation too small for the winding");
  }
  OperatorFn op = [m, domain, target](std::size_t, const Coord&) {
    CMatrix p = CMatrix::Zero(target, domain);
    for (int j = 0; j < domain; ++j)
      if (j + m >= 0 && j + m < target) p(j + m, j) = 1.0;
    return p;
  };
  SymbolFn symbol = [m](std::size_t, const Coord&, double theta, int xi) {
    return CMatrix(CMatrix::Constant(1, 1, xi > 0 ? std::polar(1.0, m * theta) : Complex(1.0)));
  };
  const CombinatorialCover& cover = atlas->cover();
  return FamilySpec{"winding(" + std::to_string(m) + ")",
                    atlas,
                    FiberModel{k, 1, true},
                    std::move(op),
                    std::move(symbol),
                    1,
                    trivial_bundle(cover, domain),
                    trivial_bundle(cover, target),
                    {},
                    {},
                    trivial_bundle(cover, 1)};
}

FamilySpec identity(AtlasPtr atlas, int coeff_dim, int truncation) {
  const FiberModel fm{truncation, coeff_dim, false};
  const int d = fm.dimension();
  const CombinatorialCover& cover = atlas->cover();
  return FamilySpec{"identity",
                    atlas,
                    fm,
                    [d](std::size_t, const Coord&) { return CMatrix(CMatrix::Identity(d, d)); },
                    [coeff_dim](std::size_t, const Coord&, double, int) {
                      return CMatrix(CMatrix::Identity(coeff_dim, coeff_dim));
                    },
                    coeff_dim,
                    trivial_bundle(cover, d),
                    trivial_bundle(cover, d),
                    {},
                    {},
                    trivial_bundle(cover, 1)};
}

}  // namespace families

}  // namespace gidx
