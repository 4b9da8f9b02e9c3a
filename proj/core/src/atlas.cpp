#include "gidx/atlas.hpp"

#include <cmath>
#include <sstream>

#include "gidx/error.hpp"

namespace gidx {

namespace {

constexpr const char* kModule = "chern-weil";

// Bump in the angle from the chart centre: 1 up to 60 degrees, 0 beyond 110.
constexpr double kInnerAngle = 60.0 * kPi / 180.0;
constexpr double kOuterAngle = 110.0 * kPi / 180.0;
// tan(57 deg): the box contains the disc of angle 110 degrees (r = tan 55).
const double kHalfWidth = std::tan(57.0 * kPi / 180.0);

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

SphereChart chart_at(const Eigen::Vector3d& c, const Eigen::Vector3d& e1) {
  return {c, e1, c.cross(e1)};
}

}  // namespace

Eigen::Vector3d SphereChart::to_sphere(const Coord& x) const {
  const double r2 = x.squaredNorm();
  return (2.0 * x(0) * e1 + 2.0 * x(1) * e2 + (1.0 - r2) * center) / (1.0 + r2);
}

Coord SphereChart::from_sphere(const Eigen::Vector3d& p) const {
  const double s = 1.0 + p.dot(center);
  Coord x(2);
  x << p.dot(e1) / s, p.dot(e2) / s;
  return x;
}

std::shared_ptr<const Atlas> Atlas::point() {
  std::shared_ptr<Atlas> a(new Atlas());
  a->dim_ = 0;
  a->cover_ = CombinatorialCover::of(complexes::point());
  a->nodes_.push_back(Coord(0));
  a->weights_.push_back(1.0);
  a->pou_ = {{1.0}};
  a->ambient_ = {{Point(0)}};
  a->overlaps_.assign(1, std::vector<std::vector<OverlapNode>>(1));
  return a;
}

std::shared_ptr<const Atlas> Atlas::sphere_two_patch(int grid) {
  std::shared_ptr<Atlas> a(new Atlas());
  a->dim_ = 2;
  a->grid_ = grid;
  a->charts_ = {chart_at({0, 0, 1}, {1, 0, 0}), chart_at({0, 0, -1}, {1, 0, 0})};
  a->cover_ = CombinatorialCover::of(complexes::edge());
  a->build();
  return a;
}

std::shared_ptr<const Atlas> Atlas::sphere_three_patch(int grid) {
  std::shared_ptr<Atlas> a(new Atlas());
  a->dim_ = 2;
  a->grid_ = grid;
  for (int k = 0; k < 3; ++k) {
    const double g = 2.0 * kPi * k / 3.0;
    a->charts_.push_back(chart_at({std::cos(g), std::sin(g), 0.0}, {-std::sin(g), std::cos(g), 0.0}));
  }
  a->cover_ = CombinatorialCover::of(complexes::triangle());
  a->build();
  return a;
}

void Atlas::build() {
  if (grid_ < 1) throw Error(ErrorCode::GridTooCoarse, kModule, "Atlas", "grid must be >= 1");
  half_width_ = kHalfWidth;
  h_ = 2.0 * half_width_ / grid_;
  nodes_.clear();
  weights_.clear();
  for (int i = 0; i < grid_; ++i) {
    for (int j = 0; j < grid_; ++j) {
      Coord x(2);
      x << -half_width_ + (i + 0.5) * h_, -half_width_ + (j + 0.5) * h_;
      nodes_.push_back(x);
      weights_.push_back(h_ * h_);
    }
  }
  const std::size_t np = charts_.size();
  pou_.assign(np, std::vector<double>(nodes_.size(), 0.0));
  ambient_.assign(np, std::vector<Point>(nodes_.size()));
  overlaps_.assign(np, std::vector<std::vector<OverlapNode>>(np));
  for (std::size_t a = 0; a < np; ++a) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Point p = to_ambient(a, nodes_[i]);
      ambient_[a][i] = p;
      pou_[a][i] = partition(a, p);
      for (std::size_t b = 0; b < np; ++b) {
        if (b == a || !in_set(b, p)) continue;
        if (!cover_.base->contains({static_cast<int>(std::min(a, b)), static_cast<int>(std::max(a, b))})) {
          throw Error(ErrorCode::IncompatibleAtlas, kModule, "Atlas",
                      "sets " + std::to_string(a) + " and " + std::to_string(b) +
                          " overlap but the nerve has no such edge");
        }
        overlaps_[a][b].push_back({i, to_chart(b, p), jacobian(a, b, nodes_[i])});
      }
    }
  }
}

std::string Atlas::description() const {
  std::ostringstream os;
  if (dim_ == 0) {
    os << "point";
  } else {
    os << charts_.size() << "-patch stereographic sphere atlas, " << grid_ << "x" << grid_
       << " midpoint grid on [-" << half_width_ << ", " << half_width_ << "]^2";
  }
  return os.str();
}

std::size_t Atlas::grid_index(long i, long j) const {
  if (i < 0 || j < 0 || i >= grid_ || j >= grid_) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(i * grid_ + j);
}

Point Atlas::to_ambient(std::size_t patch, const Coord& x) const {
  if (dim_ == 0) return Point(0);
  return charts_[patch].to_sphere(x);
}

Coord Atlas::to_chart(std::size_t patch, const Point& p) const {
  if (dim_ == 0) return Coord(0);
  return charts_[patch].from_sphere(p.head<3>());
}

Eigen::MatrixXd Atlas::jacobian(std::size_t a, std::size_t b, const Coord& x) const {
  if (dim_ == 0) return Eigen::MatrixXd(0, 0);
  // exact derivative of y(p(x)) via the quotient rule
  const SphereChart& ca = charts_[a];
  const SphereChart& cb = charts_[b];
  const double r2 = x.squaredNorm();
  const double s = 1.0 + r2;
  const Eigen::Vector3d p = ca.to_sphere(x);
  Eigen::Matrix<double, 3, 2> dp;
  for (int k = 0; k < 2; ++k) {
    const Eigen::Vector3d dnum = 2.0 * (k == 0 ? ca.e1 : ca.e2) - 2.0 * x(k) * ca.center;
    dp.col(k) = (dnum - 2.0 * x(k) * p) / s;
  }
  const double q = 1.0 + p.dot(cb.center);
  Eigen::MatrixXd j(2, 2);
  for (int k = 0; k < 2; ++k) {
    const double dq = dp.col(k).dot(cb.center);
    j(0, k) = (dp.col(k).dot(cb.e1) * q - p.dot(cb.e1) * dq) / (q * q);
    j(1, k) = (dp.col(k).dot(cb.e2) * q - p.dot(cb.e2) * dq) / (q * q);
  }
  return j;
}

double Atlas::bump(std::size_t patch, const Point& p) const {
  if (dim_ == 0) return 1.0;
  const double c = std::clamp(p.head<3>().dot(charts_[patch].center) / p.head<3>().norm(), -1.0, 1.0);
  const double angle = std::acos(c);
  return smooth_step((kOuterAngle - angle) / (kOuterAngle - kInnerAngle));
}

double Atlas::partition(std::size_t patch, const Point& p) const {
  if (dim_ == 0) return 1.0;
  double total = 0.0;
  for (std::size_t b = 0; b < charts_.size(); ++b) total += bump(b, p);
  return bump(patch, p) / total;
}

const std::vector<Atlas::OverlapNode>& Atlas::overlap(std::size_t a, std::size_t b) const {
  return overlaps_.at(a).at(b);
}

OverlapSampler Atlas::sampler() const {
  return [this](const Simplex& s) {
    std::vector<Point> out;
    const std::size_t a = static_cast<std::size_t>(s.front());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Point& p = ambient_[a][i];
      bool inside = in_set(a, p);
      for (std::size_t k = 1; k < s.size() && inside; ++k) inside = in_set(s[k], p);
      if (inside) out.push_back(p);
    }
    return out;
  };
}

double Atlas::partition_defect() const {
  double worst = 0.0;
  for (std::size_t a = 0; a < patch_count(); ++a) {
    for (std::size_t b = 0; b < patch_count(); ++b) {
      if (a == b) continue;
      for (const auto& o : overlap(a, b)) {
        const Point& p = ambient_[a][o.node];
        double sum = 0.0;
        for (std::size_t c = 0; c < patch_count(); ++c) sum += partition(c, p);
        worst = std::max(worst, std::abs(sum - 1.0));
        if (pou_[a][o.node] < 0.0) worst = std::max(worst, -pou_[a][o.node]);
      }
    }
  }
  return worst;
}

}  // namespace gidx
