#ifndef WKM_ORACLE_HPP
#define WKM_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wkm/core.hpp"
#include "wkm/random.hpp"

/**
 * @file oracle.hpp
 * @brief Ground truth for small instances and Monte-Carlo checks of the
 * sampling lemmas the approximation guarantee rests on.
 */

namespace wkm {

inline constexpr std::size_t kMaxOraclePoints = 14;

struct ExactResult {
  double cost = 0.0;
  /// Nonempty groups of point indices, ordered by smallest member.
  std::vector<std::vector<std::size_t>> groups;
  /// Weighted centroid of each group, padded to k by repeating the first.
  CenterSet centers;
  /// Number of set partitions scored; 0 when k >= n short-circuits.
  std::uint64_t partitions_evaluated = 0;
};

/**
 * Scores every partition of the points into at most k nonempty groups,
 * enumerated as restricted-growth strings, and keeps the cheapest. Each
 * group is charged its spread about its own weighted centroid.
 * Throws FeasibilityError for more than kMaxOraclePoints points.
 */
[[nodiscard]] ExactResult brute_force_opt(const WeightedPointSet& points, std::size_t k);

struct LemmaCheck {
  std::uint64_t repetitions = 0;
  std::uint64_t successes = 0;
  /// Fraction of repetitions meeting the cost bound.
  double rate = 0.0;
  /// Pass threshold the rate is compared against.
  double threshold = 0.0;
  bool passed = false;
};

/**
 * Uniform sampling bound: draw M unit copies with replacement and check
 * Delta(P, G(S)) <= (1 + 1/(delta M)) Delta(P, G(P)). Points are expanded
 * into w_p unit copies, so weights must be integers. Passes when the success
 * rate is at least 1 - delta - 3 sigma (binomial sigma at p = 1 - delta).
 */
[[nodiscard]] LemmaCheck verify_inaba(const WeightedPointSet& points, std::size_t m, double delta,
                                      std::uint64_t repetitions, RandomSource& rng);

struct NullSamplingCheck {
  std::uint64_t runs = 0;
  std::uint64_t draws_per_run = 0;  ///< ceil(400 / (gamma eps))
  std::uint64_t subset_size = 0;  ///< ceil(100 / eps)
  /// Runs with at least subset_size non-null draws.
  double count_rate = 0.0;
  /// Runs that also met the (1 + eps/20) cost bound.
  double success_rate = 0.0;
};

inline constexpr std::uint64_t kMaxNullSamplingDraws = 1'000'000;

/**
 * Gated sampling experiment: each of l draws yields a uniform point of P'
 * with probability gamma and nothing otherwise. A run succeeds when at least
 * ceil(100/eps) draws are non-null and a uniformly chosen subset U of that
 * size has Delta(P', G(U)) <= (1 + eps/20) Delta(P', G(P')).
 */
[[nodiscard]] NullSamplingCheck verify_null_sampling(double gamma, double epsilon, const std::vector<Point>& points,
                                                     std::uint64_t runs, RandomSource& rng);

}  // namespace wkm

#endif  // WKM_ORACLE_HPP
