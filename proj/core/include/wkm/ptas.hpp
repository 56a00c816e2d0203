#ifndef WKM_PTAS_HPP
#define WKM_PTAS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wkm/core.hpp"
#include "wkm/random.hpp"

/**
 * @file ptas.hpp
 * @brief (1 + eps)-approximate weighted k-means by iterated D^2 sampling.
 *
 * One candidate solution is built per (trial, tuple) pair: for each of the k
 * rounds, draw N points by weighted D^2 sampling against the centers so far,
 * keep the M draws named by the tuple's selector for that round, and add
 * their weighted centroid as the next center. The cheapest candidate wins.
 *
 * Enumerating every tuple is only possible for tiny N and M, so by default a
 * budget of uniformly random tuples is searched instead.
 */

namespace wkm {

/// Caller-facing knobs. Anything left unset takes the library default.
struct PtasOverrides {
  std::optional<double> c1;  ///< N = ceil(c1 * k / eps^2), default 800
  std::optional<double> c2;  ///< M = ceil(c2 / eps), default 100
  std::optional<std::uint64_t> trials;  ///< default 2^k
  std::optional<std::uint64_t> tuple_budget;  ///< default kDefaultTupleBudget
  bool exhaustive = false;  ///< enumerate every tuple instead of sampling a budget
  bool adjust_epsilon = false;  ///< run at eps / ((1 + eps/2) k)
  bool share_samples = false;  ///< tuples with a common selector prefix reuse samples
  unsigned threads = 1;
};

inline constexpr double kPaperC1 = 800.0;
inline constexpr double kPaperC2 = 100.0;
inline constexpr std::uint64_t kDefaultTupleBudget = 2000;
inline constexpr std::uint64_t kMaxExhaustiveTuples = 10'000'000;

struct PtasParams {
  std::size_t k = 1;
  double epsilon = 0.5;
  /// Accuracy actually used to derive N and M.
  double working_epsilon = 0.5;
  double c1 = kPaperC1;
  double c2 = kPaperC2;
  std::uint64_t trials = 2;
  /// nullopt means exhaustive enumeration.
  std::optional<std::uint64_t> tuple_budget = kDefaultTupleBudget;
  bool adjust_epsilon = false;
  bool share_samples = false;
  unsigned threads = 1;
  std::size_t sample_size = 0;  ///< N
  std::size_t subset_size = 0;  ///< M
};

[[nodiscard]] PtasParams derive_params(std::size_t k, double epsilon, const PtasOverrides& overrides = {});

/// Divides every weight by the smallest one. Returns the new set and the divisor.
[[nodiscard]] std::pair<WeightedPointSet, double> rescale_weights(const WeightedPointSet& points);

/// k selectors, each a sorted list of M distinct positions in [0, N).
class CandidateTuple {
 public:
  CandidateTuple(std::size_t k, std::size_t subset_size, std::vector<std::uint32_t> positions);

  [[nodiscard]] std::size_t k() const noexcept { return k_; }
  [[nodiscard]] std::size_t subset_size() const noexcept { return m_; }
  [[nodiscard]] std::span<const std::uint32_t> selector(std::size_t i) const noexcept {
    return {positions_.data() + i * m_, m_};
  }
  /// Hash of selectors [0, rounds); identifies the shared-sample prefix.
  [[nodiscard]] std::uint64_t prefix_key(std::size_t rounds) const noexcept;

  friend bool operator==(const CandidateTuple&, const CandidateTuple&) = default;

 private:
  std::size_t k_;
  std::size_t m_;
  std::vector<std::uint32_t> positions_;
};

/// C(n, m), saturating at `cap` + 1.
[[nodiscard]] std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t m, std::uint64_t cap);

/**
 * Yields candidate tuples either exhaustively, in lexicographic order of the
 * per-round subset ranks with the last round varying fastest, or as
 * `budget` independent uniform tuples.
 */
class TupleStream {
 public:
  TupleStream(std::size_t sample_size, std::size_t subset_size, std::size_t k, std::optional<std::uint64_t> budget,
              RandomSource rng);

  [[nodiscard]] std::optional<CandidateTuple> next();
  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  [[nodiscard]] bool exhaustive() const noexcept { return exhaustive_; }

 private:
  std::size_t n_;
  std::size_t m_;
  std::size_t k_;
  bool exhaustive_;
  std::uint64_t count_;
  std::uint64_t emitted_ = 0;
  RandomSource rng_;
  std::vector<std::uint32_t> current_;
};

/// Throws FeasibilityError when exhaustive mode would exceed kMaxExhaustiveTuples.
[[nodiscard]] TupleStream enumerate_or_sample_tuples(const PtasParams& params, RandomSource rng);

/// Samples reused across tuples when `share_samples` is on. One per worker.
using SampleMemo = std::unordered_map<std::uint64_t, std::vector<std::size_t>>;

/**
 * Builds the k centers for one tuple. Returns the result with assignment
 * and cost. When every point already sits on a center the remaining slots
 * are filled with copies of the first center.
 */
[[nodiscard]] ClusteringResult run_trial(const WeightedPointSet& points, const CandidateTuple& tuple,
                                         const PtasParams& params, RandomSource rng, SampleMemo* memo = nullptr);

/// One evaluated candidate, reported in deterministic (trial, tuple) order.
struct TupleOutcome {
  std::uint64_t trial;
  std::uint64_t tuple;
  double cost;
};

using PtasObserver = std::function<void(const TupleOutcome&)>;

/**
 * Minimum-cost candidate over all trials and tuples. The result depends only
 * on (points, k, epsilon, overrides, master_seed), never on `threads`.
 * With k at least the number of distinct points the distinct points
 * themselves are returned at zero cost.
 */
[[nodiscard]] ClusteringResult solve(const WeightedPointSet& points, std::size_t k, double epsilon,
                                     const PtasOverrides& overrides, std::uint64_t master_seed,
                                     const PtasObserver& observer = {});

/// Distinct points in order of first occurrence.
[[nodiscard]] std::vector<std::size_t> distinct_point_indices(const WeightedPointSet& points);

}  // namespace wkm

#endif  // WKM_PTAS_HPP
