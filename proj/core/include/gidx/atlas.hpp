#pragma once

#include <memory>
#include <vector>

#include "gidx/gerbe.hpp"
#include "gidx/linalg.hpp"
#include "gidx/projective_bundle.hpp"

namespace gidx {

using Coord = Eigen::VectorXd;  // chart coordinates (length = atlas dimension)

// Stereographic chart of S^2 centred at `center`, with (e1, e2, center) a
// right-handed orthonormal frame. x = (p.e1, p.e2) / (1 + p.center).
struct SphereChart {
  Eigen::Vector3d center, e1, e2;

  Eigen::Vector3d to_sphere(const Coord& x) const;
  Coord from_sphere(const Eigen::Vector3d& p) const;
};

// Patch atlas with midpoint-rule product grids on boxes [-R, R]^d and a
// smooth partition of unity. Cover set a is the support of bump_a; the
// nerve of the cover is stored as a combinatorial cover.
class Atlas {
 public:
  struct OverlapNode {
    std::size_t node;   // node index in patch a
    Coord y;            // coordinates of the same point in patch b
    Eigen::MatrixXd jacobian;  // dy/dx
  };

  // Single point (dimension 0).
  static std::shared_ptr<const Atlas> point();
  // Two charts centred at the poles.
  static std::shared_ptr<const Atlas> sphere_two_patch(int grid = 64);
  // Three charts centred on the equator at 0, 120 and 240 degrees.
  static std::shared_ptr<const Atlas> sphere_three_patch(int grid = 64);

  int dimension() const noexcept { return dim_; }
  int grid() const noexcept { return grid_; }
  double half_width() const noexcept { return half_width_; }
  double spacing() const noexcept { return h_; }
  std::size_t patch_count() const noexcept { return charts_.size() ? charts_.size() : 1; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const CombinatorialCover& cover() const noexcept { return cover_; }
  const std::vector<SphereChart>& charts() const noexcept { return charts_; }
  std::string description() const;

  const Coord& node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  double pou(std::size_t patch, std::size_t i) const { return pou_[patch][i]; }
  const Point& ambient(std::size_t patch, std::size_t i) const { return ambient_[patch][i]; }
  // Grid neighbours: node index of (i + di, j + dj) or npos.
  std::size_t grid_index(long i, long j) const;

  Point to_ambient(std::size_t patch, const Coord& x) const;
  Coord to_chart(std::size_t patch, const Point& p) const;
  // dy/dx for the chart change a -> b at chart-a coordinates x.
  Eigen::MatrixXd jacobian(std::size_t a, std::size_t b, const Coord& x) const;

  double bump(std::size_t patch, const Point& p) const;
  double partition(std::size_t patch, const Point& p) const;
  bool in_set(std::size_t patch, const Point& p) const { return bump(patch, p) > 0.0; }

  // Nodes of patch a inside U_b, with their chart-b coordinates.
  const std::vector<OverlapNode>& overlap(std::size_t a, std::size_t b) const;
  // Ambient sample points of an edge or triangle overlap (nodes of the
  // lowest-index patch lying in all listed sets).
  OverlapSampler sampler() const;
  // max |sum_a phi_a - 1| over overlap nodes.
  double partition_defect() const;

 private:
  Atlas() = default;
  void build();

  int dim_ = 0;
  int grid_ = 1;
  double half_width_ = 0.0;
  double h_ = 1.0;
  std::vector<SphereChart> charts_;
  CombinatorialCover cover_;
  std::vector<Coord> nodes_;
  std::vector<double> weights_;
  std::vector<std::vector<double>> pou_;
  std::vector<std::vector<Point>> ambient_;
  std::vector<std::vector<std::vector<OverlapNode>>> overlaps_;
};

using AtlasPtr = std::shared_ptr<const Atlas>;

}  // namespace gidx
