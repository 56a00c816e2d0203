#include "wkm/baselines.hpp"

#include <vector>

#include "wkm/error.hpp"
#include "wkm/sampling.hpp"
#include "wkm/summation.hpp"

namespace wkm {

CenterSet kmeanspp_seed(const WeightedPointSet& points, std::size_t k, RandomSource& rng) {
  if (k == 0) throw InputError("k must be positive");
  DistanceCache cache(points.size());
  CenterSet centers(points.dim());
  while (centers.size() < k) {
    const SamplingWeights weights = cache.weights(points);
    if (weights.degenerate()) {
      const Point first(centers.center(0).begin(), centers.center(0).end());
      while (centers.size() < k) centers.add(first);
      break;
    }
    const std::size_t pick = sample_index(weights, rng);
    centers.add(points.point(pick));
    cache.add_center(points.point(pick), points);
  }
  return centers;
}

ClusteringResult lloyd_descend(const WeightedPointSet& points, const CenterSet& init, const LloydParams& params) {
  if (init.empty()) throw InputError("no centers");
  if (params.max_iters == 0) throw InputError("max_iters must be positive");

  RunMeta meta;
  meta.solver = "lloyd";
  meta.params = {{"max_iters", std::to_string(params.max_iters)},
                 {"rel_improvement_tol", format_number(params.rel_improvement_tol)}};

  ClusteringResult current = evaluate(points, init, meta);
  current.meta.cost_trace.push_back(current.cost);
  const std::size_t k = init.size();
  const std::size_t d = points.dim();

  for (std::size_t iter = 0; iter < params.max_iters; ++iter) {
    std::vector<CompensatedSum> sums(k * d);
    std::vector<CompensatedSum> mass(k);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = current.assignment[i];
      const double w = points.weight(i);
      const auto p = points.point(i);
      for (std::size_t j = 0; j < d; ++j) sums[c * d + j].add(w * p[j]);
      mass[c].add(w);
    }
    std::vector<double> coords(current.centers.coords().begin(), current.centers.coords().end());
    for (std::size_t c = 0; c < k; ++c) {
      const double m = mass[c].value();
      if (m > 0.0) {
        for (std::size_t j = 0; j < d; ++j) coords[c * d + j] = sums[c * d + j].value() / m;
      }
    }

    ClusteringResult next = evaluate(points, CenterSet(d, std::move(coords)), {});
    next.meta = std::move(current.meta);
    next.meta.iterations = iter + 1;
    next.meta.cost_trace.push_back(next.cost);

    const bool stable = next.assignment == current.assignment;
    const double previous = current.cost;
    current = std::move(next);
    if (stable || previous - current.cost <= params.rel_improvement_tol * previous) break;
  }
  return current;
}

}  // namespace wkm
