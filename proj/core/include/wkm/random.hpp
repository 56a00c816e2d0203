#ifndef WKM_RANDOM_HPP
#define WKM_RANDOM_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace wkm {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/**
 * Deterministic xoshiro256** stream keyed by (seed, stream id).
 *
 * The state is a pure function of the key, so any task can rebuild its own
 * stream without touching a shared generator. `fork` derives child streams
 * hierarchically, e.g. `root.fork(trial).fork(tuple)`.
 *
 * All derived quantities (uniform doubles, bounded integers) are computed
 * here rather than through `<random>` distributions, whose output is not
 * specified across standard library implementations.
 *
 * Not thread-safe; give each thread its own instance.
 */
class RandomSource {
 public:
  using result_type = std::uint64_t;

  explicit RandomSource(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

  /// Child stream. Independent of how many values this source has produced.
  [[nodiscard]] RandomSource fork(std::uint64_t id) const noexcept;

  std::uint64_t next() noexcept;
  std::uint64_t operator()() noexcept { return next(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform on {0, ..., bound - 1}; `bound` must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;

  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return std::numeric_limits<std::uint64_t>::max(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> s_;
};

}  // namespace wkm

#endif  // WKM_RANDOM_HPP
