#ifndef WKM_CORE_HPP
#define WKM_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

/**
 * @file core.hpp
 * @brief Weighted point sets, center sets and the weighted k-means cost.
 *
 * Points are stored row-major in one flat buffer. Every accessor hands out a
 * `std::span` over that buffer rather than copying.
 */

namespace wkm {

using Point = std::vector<double>;
using PointView = std::span<const double>;

/**
 * A nonempty list of d-dimensional points, each carrying a positive finite
 * weight. The universal input of every solver in the library.
 */
class WeightedPointSet {
 public:
  /// `coords` holds `weights.size() * dim` values, row-major.
  WeightedPointSet(std::size_t dim, std::vector<double> coords, std::vector<double> weights);

  static WeightedPointSet from_rows(const std::vector<Point>& points, const std::vector<double>& weights);
  /// All weights equal to one.
  static WeightedPointSet unit(const std::vector<Point>& points);

  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] PointView point(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  [[nodiscard]] double weight(std::size_t i) const noexcept { return weights_[i]; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
  [[nodiscard]] double total_weight() const noexcept { return total_weight_; }

  /// Same coordinates, new weights (validated).
  [[nodiscard]] WeightedPointSet with_weights(std::vector<double> weights) const;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> weights_;
  double total_weight_;
};

/// Ordered list of centers in R^d. May be empty while a solver is building it.
class CenterSet {
 public:
  explicit CenterSet(std::size_t dim = 0) : dim_(dim) {}
  CenterSet(std::size_t dim, std::vector<double> coords);

  static CenterSet from_rows(const std::vector<Point>& centers);

  [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  [[nodiscard]] bool empty() const noexcept { return coords_.empty(); }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] PointView center(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }

  void add(PointView c);

  friend bool operator==(const CenterSet&, const CenterSet&) = default;

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

/// Provenance attached to every solver output.
struct RunMeta {
  std::string solver;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;
  std::size_t iterations = 0;
  /// Cost after each iteration, for iterative solvers.
  std::vector<double> cost_trace;
};

struct ClusteringResult {
  CenterSet centers;
  /// Index into `centers` for each input point.
  std::vector<std::size_t> assignment;
  double cost = 0.0;
  RunMeta meta;
};

struct Nearest {
  std::size_t index;
  double sq_dist;
};

[[nodiscard]] double squared_distance(PointView a, PointView b) noexcept;

/// Closest center by squared distance; exact ties go to the lowest index.
[[nodiscard]] Nearest nearest_center(PointView p, const CenterSet& centers);

/// Sum over points of w_p times the squared distance to the nearest center.
[[nodiscard]] double weighted_cost(const WeightedPointSet& points, const CenterSet& centers);

[[nodiscard]] Point weighted_centroid(const WeightedPointSet& points);

/// Centroid of the sub-multiset named by `indices`. An index that appears
/// twice counts twice, each time with the point's full weight.
[[nodiscard]] Point weighted_centroid(const WeightedPointSet& points, std::span<const std::size_t> indices);

/// Spread about the centroid plus total weight times the squared distance
/// from `c` to the centroid. Equal to the single-center cost about `c`.
[[nodiscard]] double parallel_axis_rhs(const WeightedPointSet& points, PointView c);

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] std::string format_number(double x);

/// Assigns every point to its nearest center and totals the cost.
[[nodiscard]] ClusteringResult evaluate(const WeightedPointSet& points, CenterSet centers, RunMeta meta = {});

}  // namespace wkm

#endif  // WKM_CORE_HPP
