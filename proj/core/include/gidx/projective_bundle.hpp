#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gidx/gerbe.hpp"
#include "gidx/linalg.hpp"

namespace gidx {

// A base point in ambient coordinates (R^3 for the sphere atlases, empty
// for purely combinatorial data).
using Point = Eigen::VectorXd;
using MatrixField = std::function<CMatrix(const Point&)>;

// Transition for one oriented edge (a < b): constant, or a smooth map
// evaluated wherever the atlas samples the overlap.
struct Transition {
  std::optional<CMatrix> constant;
  MatrixField field;

  static Transition fixed(CMatrix m) { return {std::move(m), {}}; }
  static Transition varying(MatrixField f) { return {std::nullopt, std::move(f)}; }
  bool is_constant() const { return constant.has_value(); }
  CMatrix at(const Point& p) const { return constant ? *constant : field(p); }
};

// Supplies sample points of a nerve simplex's overlap (an edge or a triangle).
using OverlapSampler = std::function<std::vector<Point>(const Simplex&)>;

struct BundleTolerances {
  double cocycle_constant = 1e-8;
  double cocycle_sampled = 1e-6;
  double unitary = 1e-9;
};

// Local bundles C^r over each cover set with transitions Q_ab : E_b -> E_a
// satisfying Q_ab Q_bc = zeta(theta_abc) Q_ac.
class ProjectiveBundleData {
 public:
  ProjectiveBundleData(GerbeCocycle twist, int rank, std::vector<Transition> transitions,
                       bool hermitian = true);

  const CombinatorialCover& cover() const noexcept { return twist_.cover(); }
  const GerbeCocycle& twist() const noexcept { return twist_; }
  int rank() const noexcept { return rank_; }
  bool hermitian() const noexcept { return hermitian_; }
  bool all_constant() const;
  const std::vector<Transition>& transitions() const noexcept { return q_; }

  // Q_ab at p; Q_ba = Q_ab^{-1}.
  CMatrix get(int a, int b, const Point& p = Point()) const;

 private:
  GerbeCocycle twist_;
  int rank_;
  std::vector<Transition> q_;
  bool hermitian_;
};

// Same shape with vanishing twist.
using OrdinaryBundleData = ProjectiveBundleData;

ProjectiveBundleData trivial_bundle(const CombinatorialCover& cover, int rank, long n = 1);

struct ValidationReport {
  double max_residual = 0.0;
  Simplex worst;             // triangle with the largest residual
  std::size_t worst_sample = 0;
  double max_unitary_defect = 0.0;
  std::size_t samples_checked = 0;
};

// Weak cocycle check. Constant data are checked once per triangle; varying
// data at every sample supplied by `sampler` (required then). Throws
// WeakCocycleViolation / NotUnitary naming the worst simplex.
ValidationReport validate(const ProjectiveBundleData& e, const OverlapSampler& sampler = {},
                          const BundleTolerances& tol = {});

// Residual computation without throwing.
ValidationReport measure(const ProjectiveBundleData& e, const OverlapSampler& sampler = {});

ProjectiveBundleData direct_sum(const ProjectiveBundleData& e, const ProjectiveBundleData& f);
ProjectiveBundleData tensor_ordinary(const ProjectiveBundleData& e, const OrdinaryBundleData& w);
// E^{(x) n} with the central factors cancelled; returned with zero twist.
OrdinaryBundleData tensor_power_descend(const ProjectiveBundleData& e, long n,
                                        const OverlapSampler& sampler = {},
                                        const BundleTolerances& tol = {});
// Q_ab -> zeta(mu_ab) Q_ab, twist theta -> theta + delta mu.
ProjectiveBundleData gauge_rescale(const ProjectiveBundleData& e, const Cochain& mu);

// Witness T_a per cover set (constant or varying); true iff
// Q'_ab = T_a Q_ab T_b^{-1} at every edge sample within tolerance.
bool check_equivalence_witness(const ProjectiveBundleData& e, const ProjectiveBundleData& e2,
                               const std::vector<Transition>& witness,
                               const OverlapSampler& sampler = {},
                               const BundleTolerances& tol = {});

struct KClassDifference {
  ProjectiveBundleData plus;
  ProjectiveBundleData minus;

  KClassDifference(ProjectiveBundleData p, ProjectiveBundleData m);
  int virtual_rank() const { return plus.rank() - minus.rank(); }
};

}  // namespace gidx
