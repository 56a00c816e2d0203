#include "wkm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include "wkm/baselines.hpp"
#include "wkm/core.hpp"
#include "wkm/error.hpp"
#include "wkm/instances.hpp"
#include "wkm/oracle.hpp"
#include "wkm/random.hpp"
#include "wkm/sampling.hpp"
#include "wkm/sensor.hpp"

namespace wkm {

namespace {

WeightedPointSet random_points(RandomSource& rng, std::size_t max_n, std::size_t max_d) {
  const std::size_t n = 1 + rng.below(max_n);
  const std::size_t d = 1 + rng.below(max_d);
  std::vector<double> coords(n * d);
  std::vector<double> weights(n);
  for (auto& x : coords) x = -10.0 + 20.0 * rng.uniform();
  for (auto& w : weights) w = 0.1 + 99.9 * rng.uniform();
  return {d, std::move(coords), std::move(weights)};
}

CheckResult check(std::string group, std::string name, double statistic, std::string comparison, double threshold,
                  std::string detail = {}) {
  bool passed = false;
  if (comparison == "<=") passed = statistic <= threshold;
  if (comparison == ">=") passed = statistic >= threshold;
  return {std::move(group), std::move(name), statistic, std::move(comparison), threshold, passed, std::move(detail)};
}

void parallel_axis(const VerifyOptions& opt, RandomSource rng, std::vector<CheckResult>& out) {
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto points = random_points(rng, 50, 5);
    Point c(points.dim());
    for (auto& x : c) x = -15.0 + 30.0 * rng.uniform();
    const double lhs = weighted_cost(points, CenterSet::from_rows({c}));
    const double rhs = parallel_axis_rhs(points, c);
    worst = std::max(worst, std::fabs(lhs - rhs) / std::max(lhs, std::numeric_limits<double>::min()));
  }
  out.push_back(check("parallel-axis", "max relative gap |cost - rhs| / cost over 1000 instances", worst, "<=",
                      opt.parallel_axis_tol));
}

void centroid_optimality(RandomSource rng, std::vector<CheckResult>& out) {
  double violations = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto points = random_points(rng, 50, 5);
    const double best = weighted_cost(points, CenterSet::from_rows({weighted_centroid(points)}));
    for (int t = 0; t < 200; ++t) {
      Point c(points.dim());
      for (auto& x : c) x = -10.0 + 20.0 * rng.uniform();
      if (weighted_cost(points, CenterSet::from_rows({c})) < best) violations += 1;
    }
  }
  out.push_back(check("centroid-optimality", "candidates beating the weighted centroid (100 x 200)", violations, "<=", 0));
}

void d2_distribution(RandomSource rng, std::vector<CheckResult>& out) {
  const auto points = instances::chi_square_points();
  const auto center = instances::chi_square_center();
  const SamplingWeights weights = d2_weights(points, center);
  constexpr std::size_t kDraws = 100'000;
  const auto draws = d2_sample(points, center, kDraws, rng);
  std::vector<double> counts(points.size(), 0.0);
  for (std::size_t i : draws) counts[i] += 1.0;
  double chi2 = 0.0;
  unsigned cells = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double expected = weights.probability(i) * static_cast<double>(kDraws);
    if (expected <= 0.0) continue;
    chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
    ++cells;
  }
  out.push_back(check("d2-distribution", "chi-square, 1e5 draws, 6 points, alpha 0.001", chi2, "<=",
                      chi_square_critical(0.001, cells - 1)));
}

void first_draw(RandomSource rng, std::vector<CheckResult>& out) {
  const auto points = WeightedPointSet::from_rows({{0}, {4}}, {1, 3});
  const auto draws = d2_sample(points, CenterSet(1), 100'000, rng);
  const double freq =
      static_cast<double>(std::count(draws.begin(), draws.end(), std::size_t{1})) / static_cast<double>(draws.size());
  out.push_back(check("first-draw", "frequency of the weight-3 point, lower bound", freq, ">=", 0.743));
  out.push_back(check("first-draw", "frequency of the weight-3 point, upper bound", freq, "<=", 0.757));
}

void inaba(RandomSource rng, std::vector<CheckResult>& out) {
  const auto points = instances::inaba_points();
  for (const auto& [m, delta] : {std::pair<std::size_t, double>{20, 0.5}, {100, 0.25}}) {
    const LemmaCheck c = verify_inaba(points, m, delta, 10'000, rng);
    out.push_back(check("inaba", "success rate, M=" + std::to_string(m) + " delta=" + format_number(delta), c.rate,
                        ">=", c.threshold));
  }
}

void null_sampling(RandomSource rng, std::vector<CheckResult>& out) {
  std::vector<Point> pts;
  const auto base = instances::inaba_points();
  for (std::size_t i = 0; i < base.size(); ++i) pts.emplace_back(base.point(i).begin(), base.point(i).end());
  const NullSamplingCheck c = verify_null_sampling(0.5, 1.0, pts, 1000, rng);
  out.push_back(check("null-sampling", "runs with >= 100 non-null draws (gamma 0.5, eps 1)", c.count_rate, ">=", 0.99));
  out.push_back(check("null-sampling", "runs meeting the (1 + eps/20) cost bound", c.success_rate, ">=", 0.5));
}

void lloyd_monotone(RandomSource rng, std::vector<CheckResult>& out) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 100; ++rep) {
    const auto points = random_points(rng, 200, 3);
    const std::size_t k = 1 + rng.below(5);
    const CenterSet init = kmeanspp_seed(points, k, rng);
    const auto result = lloyd_descend(points, init);
    const auto& trace = result.meta.cost_trace;
    for (std::size_t i = 1; i < trace.size(); ++i) worst = std::max(worst, trace[i] - trace[i - 1]);
  }
  out.push_back(check("lloyd-monotone", "largest per-iteration cost increase (100 instances)", std::max(worst, 0.0),
                      "<=", 1e-12));
}

void decomposition(std::vector<CheckResult>& out) {
  const auto region = make_region({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, Density(UniformDensity{}));
  const auto one = decomposition_check(region, 0.5, CenterSet::from_rows({{0.5, 0.5}}));
  out.push_back(check("decomposition", "gap, one center, grid 0.5", one.gap, "<=", 1e-6));
  const auto two = decomposition_check(region, 0.5, CenterSet::from_rows({{0.25, 0.5}, {0.75, 0.5}}));
  out.push_back(check("decomposition", "gap, grid-aligned Voronoi boundary", two.gap, "<=", 1e-6));
}

}  // namespace

const std::vector<std::string>& verification_groups() {
  static const std::vector<std::string> groups = {"parallel-axis", "centroid-optimality", "d2-distribution",
                                                  "first-draw",    "inaba",               "null-sampling",
                                                  "lloyd-monotone", "decomposition"};
  return groups;
}

double chi_square_critical(double significance, unsigned degrees_of_freedom) {
  const boost::math::chi_squared dist(degrees_of_freedom);
  return boost::math::quantile(boost::math::complement(dist, significance));
}

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  const auto& groups = verification_groups();
  for (const auto& name : options.only) {
    if (std::find(groups.begin(), groups.end(), name) == groups.end()) {
      throw InputError("unknown verification check '" + name + "'");
    }
  }
  auto wanted = [&](const std::string& g) {
    return options.only.empty() || std::find(options.only.begin(), options.only.end(), g) != options.only.end();
  };

  // Every group draws from its own stream so filtering does not shift the others.
  const RandomSource root(options.seed);
  std::vector<CheckResult> out;
  if (wanted("parallel-axis")) parallel_axis(options, root.fork(1), out);
  if (wanted("centroid-optimality")) centroid_optimality(root.fork(2), out);
  if (wanted("d2-distribution")) d2_distribution(root.fork(3), out);
  if (wanted("first-draw")) first_draw(root.fork(4), out);
  if (wanted("inaba")) inaba(root.fork(5), out);
  if (wanted("null-sampling")) null_sampling(root.fork(6), out);
  if (wanted("lloyd-monotone")) lloyd_monotone(root.fork(7), out);
  if (wanted("decomposition")) decomposition(out);
  return out;
}

}  // namespace wkm
