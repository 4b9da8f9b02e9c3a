#pragma once

#include "gidx/atlas.hpp"
#include "gidx/chern_weil.hpp"
#include "gidx/projective_bundle.hpp"

namespace gidx {

// Unit spinors spanning L(p) = range (1 + p.sigma)/2 and its complement in
// the frame adapted to a stereographic chart (w = x1 + i x2):
// s = (u+ + w u-) / sqrt(1 + |w|^2), t = (-conj(w) u+ + u-) / sqrt(1 + |w|^2).
CVector spin_frame(const SphereChart& chart, const Coord& x);
CVector spin_complement_frame(const SphereChart& chart, const Coord& x);
CMatrix spin_projector(const Point& p);  // (1 + p.sigma) / 2

// Line bundle (L*)^k with transitions conj(s_a* s_b)^k; c1 integrates to k.
ProjectiveBundleData monopole_bundle(const AtlasPtr& atlas, int k);
// -i k (x dy - y dx) / (1 + r^2) in every chart, curvature -2ik/(1+r^2)^2.
ConnectionData monopole_connection(const AtlasPtr& atlas, int k, bool analytic_override = true);

// Flat rank-1 data with constant transitions zeta^{mu_ab}; twist delta mu.
ProjectiveBundleData central_twist_line(const CombinatorialCover& cover, long n, const Cochain& mu);
ConnectionData flat_connection(const AtlasPtr& atlas, int rank);

// E (x) W with W a twisted flat line bundle and E ordinary.
ProjectiveBundleData twist_by_line(const ProjectiveBundleData& e, const ProjectiveBundleData& w);

}  // namespace gidx
