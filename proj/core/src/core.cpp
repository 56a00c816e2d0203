#include "wkm/core.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "wkm/error.hpp"
#include "wkm/summation.hpp"

namespace wkm {

namespace {

void check_finite_coords(std::span<const double> coords) {
  for (double x : coords) {
    if (!std::isfinite(x)) throw InputError("coordinates must be finite");
  }
}

}  // namespace

WeightedPointSet::WeightedPointSet(std::size_t dim, std::vector<double> coords, std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)), total_weight_(0.0) {
  if (dim_ == 0) throw InputError("dimension must be positive");
  if (weights_.empty()) throw InputError("point set is empty");
  if (coords_.size() != weights_.size() * dim_) {
    throw InputError("coordinate count does not match " + std::to_string(weights_.size()) + " points of dimension " +
                     std::to_string(dim_));
  }
  check_finite_coords(coords_);
  CompensatedSum total;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("weights must be positive and finite");
    total.add(w);
  }
  total_weight_ = total.value();
  if (!std::isfinite(total_weight_)) throw InputError("total weight overflows");
}

WeightedPointSet WeightedPointSet::from_rows(const std::vector<Point>& points, const std::vector<double>& weights) {
  if (points.empty()) throw InputError("point set is empty");
  if (points.size() != weights.size()) throw InputError("one weight per point required");
  const std::size_t dim = points.front().size();
  std::vector<double> coords;
  coords.reserve(points.size() * dim);
  for (const auto& p : points) {
    if (p.size() != dim) throw InputError("all points must share one dimension");
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return {dim, std::move(coords), weights};
}

WeightedPointSet WeightedPointSet::unit(const std::vector<Point>& points) {
  return from_rows(points, std::vector<double>(points.size(), 1.0));
}

WeightedPointSet WeightedPointSet::with_weights(std::vector<double> weights) const {
  return {dim_, coords_, std::move(weights)};
}

CenterSet::CenterSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw InputError("dimension must be positive");
  if (coords_.size() % dim_ != 0) throw InputError("center coordinates are not a whole number of points");
  check_finite_coords(coords_);
}

CenterSet CenterSet::from_rows(const std::vector<Point>& centers) {
  if (centers.empty()) throw InputError("no centers");
  CenterSet out(centers.front().size());
  for (const auto& c : centers) out.add(c);
  return out;
}

void CenterSet::add(PointView c) {
  if (dim_ == 0) dim_ = c.size();
  if (c.size() != dim_ || dim_ == 0) throw InputError("center dimension mismatch");
  coords_.insert(coords_.end(), c.begin(), c.end());
}

double squared_distance(PointView a, PointView b) noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

Nearest nearest_center(PointView p, const CenterSet& centers) {
  if (centers.empty()) throw InputError("no centers");
  if (p.size() != centers.dim()) throw InputError("dimension mismatch between point and centers");
  Nearest best{0, squared_distance(p, centers.center(0))};
  for (std::size_t i = 1; i < centers.size(); ++i) {
    const double d = squared_distance(p, centers.center(i));
    if (d < best.sq_dist) best = {i, d};
  }
  return best;
}

double weighted_cost(const WeightedPointSet& points, const CenterSet& centers) {
  if (centers.empty()) throw InputError("no centers");
  if (points.dim() != centers.dim()) throw InputError("dimension mismatch between points and centers");
  CompensatedSum cost;
  for (std::size_t i = 0; i < points.size(); ++i) {
    cost.add(points.weight(i) * nearest_center(points.point(i), centers).sq_dist);
  }
  return cost.value();
}

namespace {

template <class IndexRange>
Point centroid_of(const WeightedPointSet& points, const IndexRange& indices) {
  const std::size_t d = points.dim();
  std::vector<CompensatedSum> acc(d);
  CompensatedSum total;
  for (std::size_t i : indices) {
    const double w = points.weight(i);
    const auto p = points.point(i);
    for (std::size_t j = 0; j < d; ++j) acc[j].add(w * p[j]);
    total.add(w);
  }
  const double wsum = total.value();
  Point g(d);
  for (std::size_t j = 0; j < d; ++j) g[j] = acc[j].value() / wsum;
  return g;
}

struct IotaRange {
  std::size_t n;
  struct It {
    std::size_t i;
    std::size_t operator*() const { return i; }
    It& operator++() {
      ++i;
      return *this;
    }
    bool operator!=(const It& o) const { return i != o.i; }
  };
  [[nodiscard]] It begin() const { return {0}; }
  [[nodiscard]] It end() const { return {n}; }
};

}  // namespace

Point weighted_centroid(const WeightedPointSet& points) { return centroid_of(points, IotaRange{points.size()}); }

Point weighted_centroid(const WeightedPointSet& points, std::span<const std::size_t> indices) {
  if (indices.empty()) throw InputError("empty subset");
  for (std::size_t i : indices) {
    if (i >= points.size()) throw InputError("subset index out of range");
  }
  return centroid_of(points, indices);
}

double parallel_axis_rhs(const WeightedPointSet& points, PointView c) {
  if (c.size() != points.dim()) throw InputError("dimension mismatch between point and centers");
  const Point g = weighted_centroid(points);
  CompensatedSum spread;
  for (std::size_t i = 0; i < points.size(); ++i) {
    spread.add(points.weight(i) * squared_distance(points.point(i), g));
  }
  spread.add(points.total_weight() * squared_distance(c, g));
  return spread.value();
}

std::string format_number(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return {buf.data(), res.ptr};
}

ClusteringResult evaluate(const WeightedPointSet& points, CenterSet centers, RunMeta meta) {
  if (centers.empty()) throw InputError("no centers");
  if (points.dim() != centers.dim()) throw InputError("dimension mismatch between points and centers");
  ClusteringResult out{std::move(centers), std::vector<std::size_t>(points.size()), 0.0, std::move(meta)};
  CompensatedSum cost;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Nearest n = nearest_center(points.point(i), out.centers);
    out.assignment[i] = n.index;
    cost.add(points.weight(i) * n.sq_dist);
  }
  out.cost = cost.value();
  return out;
}

}  // namespace wkm
