#include "wkm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "wkm/error.hpp"
#include "wkm/summation.hpp"

namespace wkm {

namespace {

// Cost of the partition `label` plus the group centroids, if requested.
double partition_cost(const WeightedPointSet& points, const std::vector<std::size_t>& label, std::size_t groups,
                      std::vector<double>* centroids_out) {
  const std::size_t d = points.dim();
  std::vector<CompensatedSum> sums(groups * d);
  std::vector<CompensatedSum> mass(groups);
  for (std::size_t i = 0; i < label.size(); ++i) {
    const auto p = points.point(i);
    const double w = points.weight(i);
    for (std::size_t j = 0; j < d; ++j) sums[label[i] * d + j].add(w * p[j]);
    mass[label[i]].add(w);
  }
  std::vector<double> centroids(groups * d);
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t j = 0; j < d; ++j) centroids[g * d + j] = sums[g * d + j].value() / mass[g].value();
  }
  CompensatedSum cost;
  for (std::size_t i = 0; i < label.size(); ++i) {
    const PointView c(centroids.data() + label[i] * d, d);
    cost.add(points.weight(i) * squared_distance(points.point(i), c));
  }
  if (centroids_out != nullptr) *centroids_out = std::move(centroids);
  return cost.value();
}

class PartitionSearch {
 public:
  PartitionSearch(const WeightedPointSet& points, std::size_t k)
      : points_(points), k_(k), label_(points.size(), 0), best_label_(points.size(), 0) {}

  void run() { descend(1, 1); }

  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t best_groups = 0;
  std::uint64_t evaluated = 0;
  [[nodiscard]] const std::vector<std::size_t>& best_label() const { return best_label_; }

 private:
  // label_[0] is always 0; position i may join any existing group or open the next one.
  void descend(std::size_t i, std::size_t used) {
    if (i == label_.size()) {
      ++evaluated;
      const double c = partition_cost(points_, label_, used, nullptr);
      if (c < best_cost) {
        best_cost = c;
        best_groups = used;
        best_label_ = label_;
      }
      return;
    }
    const std::size_t limit = std::min(used + 1, k_);
    for (std::size_t g = 0; g < limit; ++g) {
      label_[i] = g;
      descend(i + 1, std::max(used, g + 1));
    }
  }

  const WeightedPointSet& points_;
  std::size_t k_;
  std::vector<std::size_t> label_;
  std::vector<std::size_t> best_label_;
};

bool is_integer(double w) { return std::floor(w) == w; }

}  // namespace

ExactResult brute_force_opt(const WeightedPointSet& points, std::size_t k) {
  if (k == 0) throw InputError("k must be positive");
  const std::size_t n = points.size();
  if (n > kMaxOraclePoints) throw FeasibilityError("instance too large for exact oracle");

  ExactResult out;
  out.centers = CenterSet(points.dim());
  if (k >= n) {
    for (std::size_t i = 0; i < n; ++i) {
      out.groups.push_back({i});
      out.centers.add(points.point(i));
    }
  } else {
    PartitionSearch search(points, k);
    search.run();
    out.partitions_evaluated = search.evaluated;
    out.groups.resize(search.best_groups);
    for (std::size_t i = 0; i < n; ++i) out.groups[search.best_label()[i]].push_back(i);
    std::vector<double> centroids;
    out.cost = partition_cost(points, search.best_label(), search.best_groups, &centroids);
    out.centers = CenterSet(points.dim(), std::move(centroids));
  }
  const Point first(out.centers.center(0).begin(), out.centers.center(0).end());
  while (out.centers.size() < k) out.centers.add(first);
  return out;
}

LemmaCheck verify_inaba(const WeightedPointSet& points, std::size_t m, double delta, std::uint64_t repetitions,
                        RandomSource& rng) {
  if (m == 0) throw InputError("M must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (repetitions == 0) throw InputError("repetitions must be positive");
  std::vector<std::size_t> copies;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!is_integer(points.weight(i))) throw InputError("expand requires integer weights");
    copies.insert(copies.end(), static_cast<std::size_t>(points.weight(i)), i);
  }

  const CenterSet full = CenterSet::from_rows({weighted_centroid(points)});
  const double bound = (1.0 + 1.0 / (delta * static_cast<double>(m))) * weighted_cost(points, full);

  // Unit copies share their source's coordinates, so G(S) is the centroid of
  // the drawn sources under unit weights.
  const WeightedPointSet unit_view = points.with_weights(std::vector<double>(points.size(), 1.0));
  std::vector<std::size_t> drawn(m);
  LemmaCheck out;
  out.repetitions = repetitions;
  for (std::uint64_t r = 0; r < repetitions; ++r) {
    for (auto& idx : drawn) idx = copies[rng.below(copies.size())];
    const CenterSet g = CenterSet::from_rows({weighted_centroid(unit_view, drawn)});
    if (weighted_cost(points, g) <= bound * (1.0 + 1e-12)) ++out.successes;
  }
  const auto reps = static_cast<double>(repetitions);
  out.rate = static_cast<double>(out.successes) / reps;
  out.threshold = 1.0 - delta - 3.0 * std::sqrt(delta * (1.0 - delta) / reps);
  out.passed = out.rate >= out.threshold;
  return out;
}

NullSamplingCheck verify_null_sampling(double gamma, double epsilon, const std::vector<Point>& points,
                                       std::uint64_t runs, RandomSource& rng) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InputError("gamma must lie in (0, 1]");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
  if (runs == 0) throw InputError("runs must be positive");
  const auto unit = WeightedPointSet::unit(points);

  auto ceil_count = [](double x) {
    const double r = std::round(x);
    return std::fabs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::ceil(x);
  };
  const double draws = ceil_count(400.0 / (gamma * epsilon));
  if (draws > static_cast<double>(kMaxNullSamplingDraws)) throw FeasibilityError("experiment too large");

  NullSamplingCheck out;
  out.runs = runs;
  out.draws_per_run = static_cast<std::uint64_t>(draws);
  out.subset_size = static_cast<std::uint64_t>(ceil_count(100.0 / epsilon));

  const CenterSet full = CenterSet::from_rows({weighted_centroid(unit)});
  const double bound = (1.0 + epsilon / 20.0) * weighted_cost(unit, full);

  std::uint64_t counted = 0;
  std::uint64_t succeeded = 0;
  std::vector<std::size_t> taken;
  for (std::uint64_t r = 0; r < runs; ++r) {
    taken.clear();
    for (std::uint64_t t = 0; t < out.draws_per_run; ++t) {
      if (rng.uniform() < gamma) taken.push_back(rng.below(unit.size()));
    }
    if (taken.size() < out.subset_size) continue;
    ++counted;
    // Partial Fisher-Yates: the first subset_size slots become a uniform subset.
    for (std::size_t i = 0; i < out.subset_size; ++i) {
      std::swap(taken[i], taken[i + rng.below(taken.size() - i)]);
    }
    const std::span<const std::size_t> u(taken.data(), out.subset_size);
    const CenterSet g = CenterSet::from_rows({weighted_centroid(unit, u)});
    if (weighted_cost(unit, g) <= bound * (1.0 + 1e-12)) ++succeeded;
  }
  out.count_rate = static_cast<double>(counted) / static_cast<double>(runs);
  out.success_rate = static_cast<double>(succeeded) / static_cast<double>(runs);
  return out;
}

}  // namespace wkm
