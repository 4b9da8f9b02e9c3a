#include "gidx/projective_bundle.hpp"

#include <sstream>

#include "gidx/error.hpp"

namespace gidx {

namespace {

constexpr const char* kModule = "projective-bundle";

std::string show(const Simplex& s) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ')';
  return os.str();
}

std::vector<Point> sample_points(const OverlapSampler& sampler,
                                 const Simplex& s, const std::vector<const Transition*>& used,
                                 const char* op) {
  bool constant = true;
  for (const auto* t : used) constant = constant && t->is_constant();
  if (constant) return {Point()};
  if (!sampler) {
    throw Error(ErrorCode::InvalidArgument, kModule, op,
                "varying transitions on " + show(s) + " but no overlap sampler");
  }
  return sampler(s);
}

void require_same_cover(const ProjectiveBundleData& e, const ProjectiveBundleData& f,
                        const char* op) {
  if (!e.cover().same_as(f.cover())) {
    throw Error(ErrorCode::CoverMismatch, kModule, op, "bundles live on different covers");
  }
}

}  // namespace

ProjectiveBundleData::ProjectiveBundleData(GerbeCocycle twist, int rank,
                                           std::vector<Transition> transitions, bool hermitian)
    : twist_(std::move(twist)), rank_(rank), q_(std::move(transitions)), hermitian_(hermitian) {
  const auto& edges = cover().base->simplices(1);
  if (q_.size() != edges.size()) {
    throw Error(ErrorCode::ShapeMismatch, kModule, "ProjectiveBundleData",
                std::to_string(q_.size()) + " transitions for " + std::to_string(edges.size()) +
                    " edges");
  }
  for (std::size_t i = 0; i < q_.size(); ++i) {
    if (q_[i].is_constant() && (q_[i].constant->rows() != rank_ || q_[i].constant->cols() != rank_)) {
      throw Error(ErrorCode::ShapeMismatch, kModule, "ProjectiveBundleData",
                  "transition on " + show(edges[i]) + " is not " + std::to_string(rank_) + "x" +
                      std::to_string(rank_));
    }
    if (!q_[i].is_constant() && !q_[i].field) {
      throw Error(ErrorCode::InvalidArgument, kModule, "ProjectiveBundleData",
                  "transition on " + show(edges[i]) + " has neither matrix nor field");
    }
  }
}

bool ProjectiveBundleData::all_constant() const {
  for (const auto& t : q_)
    if (!t.is_constant()) return false;
  return true;
}

CMatrix ProjectiveBundleData::get(int a, int b, const Point& p) const {
  if (a == b) return CMatrix::Identity(rank_, rank_);
  if (a < b) return q_[cover().base->require_index({a, b})].at(p);
  const CMatrix m = q_[cover().base->require_index({b, a})].at(p);
  if (hermitian_) return m.adjoint();
  return m.inverse();
}

ProjectiveBundleData trivial_bundle(const CombinatorialCover& cover, int rank, long n) {
  std::vector<Transition> q(cover.base->count(1), Transition::fixed(CMatrix::Identity(rank, rank)));
  return ProjectiveBundleData(GerbeCocycle::zero(cover, n), rank, std::move(q));
}

ValidationReport measure(const ProjectiveBundleData& e, const OverlapSampler& sampler) {
  ValidationReport rep;
  const auto& x = *e.cover().base;
  const int r = e.rank();
  const auto& edges = x.simplices(1);
  if (e.hermitian()) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Transition& t = e.transitions()[i];
      for (const Point& p : sample_points(sampler, edges[i], {&t}, "validate")) {
        rep.max_unitary_defect = std::max(rep.max_unitary_defect, unitarity_defect(t.at(p)));
      }
    }
  }
  for (const Simplex& s : x.simplices(2)) {
    const int a = s[0], b = s[1], c = s[2];
    const Transition& tab = e.transitions()[x.require_index({a, b})];
    const Transition& tbc = e.transitions()[x.require_index({b, c})];
    const Transition& tac = e.transitions()[x.require_index({a, c})];
    const Complex zeta = e.twist().scalar(a, b, c);
    const auto points = sample_points(sampler, s, {&tab, &tbc, &tac}, "validate");
    for (std::size_t k = 0; k < points.size(); ++k) {
      const Point& p = points[k];
      const double res =
          r == 0 ? 0.0 : spectral_norm(tab.at(p) * tbc.at(p) - zeta * tac.at(p));
      ++rep.samples_checked;
      // strict comparison keeps the lexicographically first worst simplex
      if (res > rep.max_residual || rep.worst.empty()) {
        rep.max_residual = std::max(rep.max_residual, res);
        rep.worst = s;
        rep.worst_sample = k;
      }
    }
  }
  return rep;
}

ValidationReport validate(const ProjectiveBundleData& e, const OverlapSampler& sampler,
                          const BundleTolerances& tol) {
  const ValidationReport rep = measure(e, sampler);
  const double limit = e.all_constant() ? tol.cocycle_constant : tol.cocycle_sampled;
  if (rep.max_residual > limit) {
    std::ostringstream os;
    os << "triangle " << show(rep.worst) << " sample " << rep.worst_sample << ": residual "
       << rep.max_residual << " exceeds " << limit;
    throw Error(ErrorCode::WeakCocycleViolation, kModule, "validate", os.str());
  }
  if (rep.max_unitary_defect > tol.unitary) {
    std::ostringstream os;
    os << "unitarity defect " << rep.max_unitary_defect << " exceeds " << tol.unitary;
    throw Error(ErrorCode::NotUnitary, kModule, "validate", os.str());
  }
  return rep;
}

ProjectiveBundleData direct_sum(const ProjectiveBundleData& e, const ProjectiveBundleData& f) {
  require_same_cover(e, f, "direct_sum");
  if (!(e.twist() == f.twist())) {
    throw Error(ErrorCode::TwistMismatch, kModule, "direct_sum", "summands carry different twists");
  }
  std::vector<Transition> q;
  for (std::size_t i = 0; i < e.transitions().size(); ++i) {
    const Transition& te = e.transitions()[i];
    const Transition& tf = f.transitions()[i];
    if (te.is_constant() && tf.is_constant()) {
      q.push_back(Transition::fixed(block_diag(*te.constant, *tf.constant)));
    } else {
      q.push_back(Transition::varying(
          [te, tf](const Point& p) { return block_diag(te.at(p), tf.at(p)); }));
    }
  }
  return ProjectiveBundleData(e.twist(), e.rank() + f.rank(), std::move(q),
                              e.hermitian() && f.hermitian());
}

ProjectiveBundleData tensor_ordinary(const ProjectiveBundleData& e, const OrdinaryBundleData& w) {
  require_same_cover(e, w, "tensor_ordinary");
  if (!w.twist().is_zero()) {
    throw Error(ErrorCode::TwistMismatch, kModule, "tensor_ordinary",
                "second factor must be untwisted");
  }
  std::vector<Transition> q;
  for (std::size_t i = 0; i < e.transitions().size(); ++i) {
    const Transition& te = e.transitions()[i];
    const Transition& tw = w.transitions()[i];
    if (te.is_constant() && tw.is_constant()) {
      q.push_back(Transition::fixed(kron(*te.constant, *tw.constant)));
    } else {
      q.push_back(Transition::varying([te, tw](const Point& p) { return kron(te.at(p), tw.at(p)); }));
    }
  }
  return ProjectiveBundleData(e.twist(), e.rank() * w.rank(), std::move(q),
                              e.hermitian() && w.hermitian());
}

OrdinaryBundleData tensor_power_descend(const ProjectiveBundleData& e, long n,
                                        const OverlapSampler& sampler,
                                        const BundleTolerances& tol) {
  validate(e, sampler, tol);
  for (const auto& v : e.twist().values()) {
    if ((v * n) % e.twist().n() != 0) {
      throw Error(ErrorCode::InvalidArgument, kModule, "tensor_power_descend",
                  "twist order does not divide " + std::to_string(n));
    }
  }
  auto power = [n](const CMatrix& m) {
    CMatrix acc = m;
    for (long k = 1; k < n; ++k) acc = kron(acc, m);
    return acc;
  };
  std::vector<Transition> q;
  for (const Transition& t : e.transitions()) {
    if (t.is_constant()) {
      q.push_back(Transition::fixed(power(*t.constant)));
    } else {
      q.push_back(Transition::varying([t, power](const Point& p) { return power(t.at(p)); }));
    }
  }
  int rank = 1;
  for (long k = 0; k < n; ++k) rank *= e.rank();
  return OrdinaryBundleData(GerbeCocycle::zero(e.cover(), e.twist().n()), rank, std::move(q),
                            e.hermitian());
}

ProjectiveBundleData gauge_rescale(const ProjectiveBundleData& e, const Cochain& mu) {
  const GerbeCocycle twist = gauge_transform(e.twist(), mu);
  const long n = e.twist().n();
  std::vector<Transition> q;
  for (std::size_t i = 0; i < e.transitions().size(); ++i) {
    const Complex z = root_of_unity(mu[i].get_si(), n);
    const Transition& t = e.transitions()[i];
    if (t.is_constant()) {
      q.push_back(Transition::fixed(z * *t.constant));
    } else {
      q.push_back(Transition::varying([t, z](const Point& p) -> CMatrix { return z * t.at(p); }));
    }
  }
  return ProjectiveBundleData(twist, e.rank(), std::move(q), e.hermitian());
}

bool check_equivalence_witness(const ProjectiveBundleData& e, const ProjectiveBundleData& e2,
                               const std::vector<Transition>& witness,
                               const OverlapSampler& sampler, const BundleTolerances& tol) {
  require_same_cover(e, e2, "check_equivalence_witness");
  if (e.rank() != e2.rank() || witness.size() != e.cover().set_count()) {
    throw Error(ErrorCode::ShapeMismatch, kModule, "check_equivalence_witness",
                "ranks " + std::to_string(e.rank()) + "/" + std::to_string(e2.rank()) + ", " +
                    std::to_string(witness.size()) + " witness maps for " +
                    std::to_string(e.cover().set_count()) + " sets");
  }
  if (!(e.twist() == e2.twist())) return false;
  const auto& edges = e.cover().base->simplices(1);
  const double limit = (e.all_constant() && e2.all_constant()) ? tol.cocycle_constant
                                                                : tol.cocycle_sampled;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int a = edges[i][0], b = edges[i][1];
    const Transition& q = e.transitions()[i];
    const Transition& q2 = e2.transitions()[i];
    const auto points =
        sample_points(sampler, edges[i], {&q, &q2, &witness[a], &witness[b]},
                      "check_equivalence_witness");
    for (const Point& p : points) {
      const CMatrix lhs = q2.at(p) * witness[b].at(p);
      const CMatrix rhs = witness[a].at(p) * q.at(p);
      if (spectral_norm(lhs - rhs) > limit) return false;
    }
  }
  return true;
}

KClassDifference::KClassDifference(ProjectiveBundleData p, ProjectiveBundleData m)
    : plus(std::move(p)), minus(std::move(m)) {
  if (!plus.cover().same_as(minus.cover())) {
    throw Error(ErrorCode::CoverMismatch, kModule, "KClassDifference", "covers differ");
  }
  if (!(plus.twist() == minus.twist())) {
    throw Error(ErrorCode::TwistMismatch, kModule, "KClassDifference", "twists differ");
  }
}

}  // namespace gidx
