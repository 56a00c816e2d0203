#ifndef WKM_BASELINES_HPP
#define WKM_BASELINES_HPP

#include <cstddef>

#include "wkm/core.hpp"
#include "wkm/random.hpp"

namespace wkm {

struct LloydParams {
  std::size_t max_iters = 200;
  /// Stop once (previous - current) <= tol * previous.
  double rel_improvement_tol = 1e-9;
};

/// Weighted k-means++: first center drawn proportional to weight, the rest by
/// weighted D^2 sampling. Centers are input points. When the points run out
/// (cost already zero) the remaining centers repeat the first one.
[[nodiscard]] CenterSet kmeanspp_seed(const WeightedPointSet& points, std::size_t k, RandomSource& rng);

/// Weighted Lloyd iterations from `init`. Empty clusters keep their center.
/// `meta.iterations` counts update rounds and `meta.cost_trace` holds the
/// cost before the first round followed by the cost after each round.
[[nodiscard]] ClusteringResult lloyd_descend(const WeightedPointSet& points, const CenterSet& init,
                                             const LloydParams& params = {});

}  // namespace wkm

#endif  // WKM_BASELINES_HPP
