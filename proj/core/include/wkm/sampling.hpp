#ifndef WKM_SAMPLING_HPP
#define WKM_SAMPLING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "wkm/core.hpp"
#include "wkm/random.hpp"

/**
 * @file sampling.hpp
 * @brief Weight-proportional and weighted D^2 sampling.
 *
 * With an empty center set a point is drawn with probability proportional to
 * its weight. Otherwise point p is drawn with probability proportional to
 * w_p * d(p, C)^2. Batches are drawn with replacement against a fixed C.
 */

namespace wkm {

/// Un-normalized nonnegative per-point masses.
class SamplingWeights {
 public:
  explicit SamplingWeights(std::vector<double> entries);

  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }
  [[nodiscard]] double total() const noexcept { return total_; }
  [[nodiscard]] bool degenerate() const noexcept { return !(total_ > 0.0); }
  [[nodiscard]] double probability(std::size_t i) const noexcept { return entries_[i] / total_; }

 private:
  std::vector<double> entries_;
  double total_;
};

/// Inverse-CDF sampler over a prefix-sum table. O(n) to build, O(log n) per draw.
class CategoricalSampler {
 public:
  /// Throws DegenerateDistribution when every entry is zero.
  explicit CategoricalSampler(const SamplingWeights& weights);

  std::size_t operator()(RandomSource& rng) const noexcept;

 private:
  std::vector<double> prefix_;
  std::size_t last_positive_;
};

std::size_t sample_index(const SamplingWeights& weights, RandomSource& rng);

/// w_p when `centers` is empty, w_p * d(p, centers)^2 otherwise.
[[nodiscard]] SamplingWeights d2_weights(const WeightedPointSet& points, const CenterSet& centers);

/// `count` independent draws against the fixed `centers`. Throws
/// DegenerateDistribution("cost already zero") when every point sits on a center.
[[nodiscard]] std::vector<std::size_t> d2_sample(const WeightedPointSet& points, const CenterSet& centers,
                                                 std::size_t count, RandomSource& rng);

/// cache[p] = min(cache[p], |p - new_center|^2).
void incremental_min_dist_update(std::span<double> cache, PointView new_center, const WeightedPointSet& points);

/**
 * Per-point squared distance to the nearest center added so far. Starts at
 * +infinity with no centers; `weights()` then falls back to w_p.
 */
class DistanceCache {
 public:
  explicit DistanceCache(std::size_t n);

  void add_center(PointView center, const WeightedPointSet& points);

  [[nodiscard]] std::size_t centers_added() const noexcept { return centers_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return dist_; }
  [[nodiscard]] SamplingWeights weights(const WeightedPointSet& points) const;
  /// Weighted cost against the centers added so far.
  [[nodiscard]] double cost(const WeightedPointSet& points) const;

 private:
  std::vector<double> dist_;
  std::size_t centers_ = 0;
};

}  // namespace wkm

#endif  // WKM_SAMPLING_HPP
