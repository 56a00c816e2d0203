#ifndef WKM_INSTANCES_HPP
#define WKM_INSTANCES_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "wkm/core.hpp"

/**
 * @file instances.hpp
 * @brief Small fixed instances shared by the verification suite, the
 * benchmark harness and the tests. Optimal costs are derived by hand: every
 * instance is built from groups far enough apart that the optimal partition
 * is the obvious one, and each group's spread is computed directly.
 */

namespace wkm::instances {

struct OracleInstance {
  std::string name;
  WeightedPointSet points;
  std::size_t k;
  double optimum;
};

/// Five instances with n <= 12, k <= 3, d <= 2.
[[nodiscard]] std::vector<OracleInstance> oracle_set();

/// Six 2-D points with unequal weights and the single center used by the
/// D^2 goodness-of-fit check.
[[nodiscard]] WeightedPointSet chi_square_points();
[[nodiscard]] CenterSet chi_square_center();

/// Ten 2-D points with integer weights for the uniform-sampling bound.
[[nodiscard]] WeightedPointSet inaba_points();

/// Twenty 2-D points in three loose groups for the k-means++ quality check.
[[nodiscard]] WeightedPointSet kmeanspp_points();

}  // namespace wkm::instances

#endif  // WKM_INSTANCES_HPP
