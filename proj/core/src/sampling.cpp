#include "wkm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wkm/error.hpp"
#include "wkm/summation.hpp"

namespace wkm {

SamplingWeights::SamplingWeights(std::vector<double> entries) : entries_(std::move(entries)), total_(0.0) {
  for (double e : entries_) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw InputError("sampling weights must be nonnegative and finite");
  }
  total_ = compensated_sum(entries_);
}

CategoricalSampler::CategoricalSampler(const SamplingWeights& weights) : prefix_(weights.size()), last_positive_(0) {
  if (weights.degenerate()) throw DegenerateDistribution("degenerate distribution");
  double running = 0.0;
  const auto entries = weights.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    running += entries[i];
    prefix_[i] = running;
    if (entries[i] > 0.0) last_positive_ = i;
  }
}

std::size_t CategoricalSampler::operator()(RandomSource& rng) const noexcept {
  const double u = rng.uniform() * prefix_.back();
  // First slot whose cumulative mass exceeds u; zero-mass slots never qualify.
  const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
  const auto i = static_cast<std::size_t>(it - prefix_.begin());
  return std::min(i, last_positive_);
}

std::size_t sample_index(const SamplingWeights& weights, RandomSource& rng) {
  return CategoricalSampler(weights)(rng);
}

SamplingWeights d2_weights(const WeightedPointSet& points, const CenterSet& centers) {
  std::vector<double> entries(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    entries[i] = centers.empty() ? points.weight(i)
                                 : points.weight(i) * nearest_center(points.point(i), centers).sq_dist;
  }
  return SamplingWeights(std::move(entries));
}

std::vector<std::size_t> d2_sample(const WeightedPointSet& points, const CenterSet& centers, std::size_t count,
                                   RandomSource& rng) {
  if (count == 0) throw InputError("sample count must be positive");
  const SamplingWeights weights = d2_weights(points, centers);
  if (weights.degenerate()) throw DegenerateDistribution("cost already zero");
  const CategoricalSampler sampler(weights);
  std::vector<std::size_t> out(count);
  for (auto& idx : out) idx = sampler(rng);
  return out;
}

void incremental_min_dist_update(std::span<double> cache, PointView new_center, const WeightedPointSet& points) {
  if (cache.size() != points.size()) throw InputError("distance cache size does not match point count");
  if (new_center.size() != points.dim()) throw InputError("center dimension mismatch");
  for (std::size_t i = 0; i < cache.size(); ++i) {
    cache[i] = std::min(cache[i], squared_distance(points.point(i), new_center));
  }
}

DistanceCache::DistanceCache(std::size_t n) : dist_(n, std::numeric_limits<double>::infinity()) {}

void DistanceCache::add_center(PointView center, const WeightedPointSet& points) {
  incremental_min_dist_update(dist_, center, points);
  ++centers_;
}

SamplingWeights DistanceCache::weights(const WeightedPointSet& points) const {
  std::vector<double> entries(points.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i] = centers_ == 0 ? points.weight(i) : points.weight(i) * dist_[i];
  }
  return SamplingWeights(std::move(entries));
}

double DistanceCache::cost(const WeightedPointSet& points) const {
  if (centers_ == 0) throw InputError("no centers");
  CompensatedSum s;
  for (std::size_t i = 0; i < dist_.size(); ++i) s.add(points.weight(i) * dist_[i]);
  return s.value();
}

}  // namespace wkm
