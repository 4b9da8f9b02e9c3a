#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gidx/atlas.hpp"
#include "gidx/chern_weil.hpp"
#include "gidx/projective_bundle.hpp"

namespace gidx {

// Fourier truncation of functions on the circle with values in C^v.
// Full mode keeps k = -K..K, Hardy mode k = 0..K. Coefficient index of
// (mode k, component c) is slot(k) * v + c.
struct FiberModel {
  int truncation = 16;
  int coeff_dim = 1;
  bool hardy = false;

  int mode_count() const { return hardy ? truncation + 1 : 2 * truncation + 1; }
  int dimension() const { return coeff_dim * mode_count(); }
  int slot(int k) const { return hardy ? k : k + truncation; }
};

// P_a(x): target x domain matrix in the local frames of patch a.
using OperatorFn = std::function<CMatrix(std::size_t patch, const Coord& x)>;
// Principal symbol at fiber angle theta and co-direction xi = +1 / -1.
using SymbolFn = std::function<CMatrix(std::size_t patch, const Coord& x, double theta, int xi)>;

struct FamilySpec {
  std::string name;
  AtlasPtr atlas;
  FiberModel fiber;
  OperatorFn op;
  SymbolFn symbol;
  int symbol_rank = 1;
  // Source and target bundles of the truncated family (ranks = domain and
  // target dimension); they carry the same twist.
  ProjectiveBundleData source;
  ProjectiveBundleData target;
  // Connections of the source and target bundles in patch frames (zero
  // when empty).
  ConnectionFn source_connection;
  ConnectionFn target_connection;
  // Rank-1 line carrying the twist; stabilizer copies are C^N tensor it.
  ProjectiveBundleData stabilizer_line;
};

struct EllipticReport {
  bool elliptic = true;
  double worst_condition = 1.0;
  std::size_t patch = 0, node = 0;
  double theta = 0.0;
  int xi = 1;
};

struct FamilyTolerances {
  double kappa_max = 1e8;
  double compat = 1e-8;
  // Smallest singular value of P + f accepted at grid nodes. Grid sampling
  // cannot certify surjectivity between nodes, so a margin is required.
  double surjectivity_gap = 0.05;
  double kernel_relative = 1e-8;
  int max_stabilizer = 16;
  double frame_gram = 1e-6;
};

// Symbol invertibility on every node and on a theta grid of `theta_samples`.
EllipticReport check_elliptic(const FamilySpec& f, int theta_samples = 64,
                              const FamilyTolerances& tol = {});

// max over overlap nodes of || Q-_ab P_b Q+_ab^{-1} - P_a ||.
double check_projective_compat(const FamilySpec& f);

// Stabilizer: N copies mapped into the target by the columns of `map`.
struct Stabilizer {
  int n = 0;
  CMatrix map;  // target dim x N, constant in the local frames
  double min_singular = 0.0;
};

// Smallest N (upward from the largest node cokernel) for which [P | f_N]
// with f_N = first N target basis vectors clears the surjectivity gap.
// Throws StabilizationFailed.
Stabilizer stabilize(const FamilySpec& f, const FamilyTolerances& tol = {});
// Checks a given map; min_singular filled in. Throws StabilizationFailed.
Stabilizer check_stabilizer(const FamilySpec& f, const CMatrix& map,
                            const FamilyTolerances& tol = {});

struct IndexBundle {
  KClassDifference cls;  // ker(P + f) - stabilizer^N
  Stabilizer stabilizer;
  // Orthonormal kernel frames (domain + N) x rank at every node, aligned
  // within each patch to the frame at the chart origin.
  std::vector<std::vector<CMatrix>> frames;
  ConnectionData berry;
  double min_singular = 0.0;
  int kernel_rank() const { return cls.plus.rank(); }
};

// Kernel frame of [P_a(x) | f] at an arbitrary chart point, aligned to the
// patch reference.
class KernelFrames {
 public:
  KernelFrames(FamilySpec f, Stabilizer s, const FamilyTolerances& tol = {});
  int rank() const { return rank_; }
  CMatrix raw(std::size_t patch, const Coord& x) const;
  CMatrix aligned(std::size_t patch, const Coord& x) const;
  // K'* dK' along each chart direction for the aligned frame K', from the
  // projector calculus P dP R = -P dM* (M M*)^{-1} M R with dM by central
  // differences of the operator.
  OneFormValue frame_connection(std::size_t patch, const Coord& x, double step) const;

 private:
  std::shared_ptr<const FamilySpec> f_;
  Stabilizer s_;
  FamilyTolerances tol_;
  int rank_ = 0;
  std::vector<CMatrix> reference_;
};

// Kernel frames at every node, induced transitions K_a* Q_ab K_b and the
// Berry connection. Throws NonConstantKernel / FrameDegeneracy.
IndexBundle analytic_index(const FamilySpec& f, const Stabilizer& s,
                           const FamilyTolerances& tol = {});

// Berry connection K*(dK + A_source K) by central differences (step in chart
// units) of aligned frames. Throws GridTooCoarse for grids below 3 nodes.
ConnectionData berry_connection(const FamilySpec& f, const Stabilizer& s, double step = 1e-5,
                                const FamilyTolerances& tol = {});

// Integrals of the Chern character of an index class on the base: [0] is
// the virtual rank, [1] the degree-2 integral (2-dimensional bases only).
std::vector<double> index_chern_integrals(const IndexBundle& idx, bool use_override = false);

// Block-diagonal sum of two families over the same atlas.
FamilySpec direct_sum_family(const FamilySpec& a, const FamilySpec& b);
// Adjoint family: P* with source and target swapped, symbol inverted.
FamilySpec adjoint_family(const FamilySpec& a);
// Tensor with a flat twisted line: transitions rescaled by zeta^mu.
FamilySpec twist_family(const FamilySpec& a, const ProjectiveBundleData& line);
// theta -> theta + delta mu on source, target and stabilizer line.
FamilySpec gauge_family(const FamilySpec& a, const Cochain& mu);

namespace families {

// Hardy-space Toeplitz family P(b) = Pi+ M_g Pi+ with g_b(z) = z Pr(b) + (1 - Pr(b)),
// Pr(b) the spin projector. Domain: C^2 (x) modes 0..K-1 plus L-perp z^K in
// the chart frame t_a; target: C^2 (x) modes 0..K. Exact truncation: no
// spurious kernel at the top mode.
// `n` labels the (zero) twist group Z_n of the bundles.
FamilySpec bott_toeplitz(AtlasPtr atlas, int truncation = 16, long n = 1);
// Scalar Toeplitz T_{z^m} on modes 0..K (domain modes 0..K-m for m >= 0).
FamilySpec winding(AtlasPtr atlas, int m, int truncation = 16);
// Identity on the full model: invertible, index zero.
FamilySpec identity(AtlasPtr atlas, int coeff_dim = 1, int truncation = 8);

}  // namespace families

}  // namespace gidx
