#ifndef WKM_VERIFY_HPP
#define WKM_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace wkm {

struct VerifyOptions {
  std::uint64_t seed = 0;
  double parallel_axis_tol = 1e-9;
  /// Groups to run; empty runs all of them.
  std::vector<std::string> only;
};

/// One line of the verification report: `statistic <comparison> threshold`.
struct CheckResult {
  std::string group;
  std::string name;
  double statistic = 0.0;
  std::string comparison;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

/// parallel-axis, centroid-optimality, d2-distribution, first-draw, inaba,
/// null-sampling, lloyd-monotone, decomposition.
[[nodiscard]] const std::vector<std::string>& verification_groups();

/// Throws InputError for an unknown group name in `only`.
[[nodiscard]] std::vector<CheckResult> run_verification(const VerifyOptions& options);

/// Upper critical value of the chi-square distribution.
[[nodiscard]] double chi_square_critical(double significance, unsigned degrees_of_freedom);

}  // namespace wkm

#endif  // WKM_VERIFY_HPP
