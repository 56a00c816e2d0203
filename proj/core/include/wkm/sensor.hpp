#ifndef WKM_SENSOR_HPP
#define WKM_SENSOR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "wkm/core.hpp"
#include "wkm/geometry.hpp"
#include "wkm/ptas.hpp"

/**
 * @file sensor.hpp
 * @brief Sensor coverage on a convex region as weighted k-means.
 *
 * The region is cut by a square grid; each clipped cell becomes one weighted
 * point (its density mass at its center of mass). The coverage cost of any
 * center set then equals the weighted k-means cost of those points plus the
 * cells' moments of inertia, exactly when no Voronoi boundary crosses a cell.
 */

namespace wkm {

struct UniformDensity {};

struct GaussianComponent {
  Vec2 mean;
  /// Row-major 2x2 covariance, symmetric positive definite.
  std::array<double, 4> cov{1.0, 0.0, 0.0, 1.0};
  double weight = 1.0;
};

struct GaussianMixtureDensity {
  std::vector<GaussianComponent> components;
};

/// Piecewise constant on an nx-by-ny grid of cells starting at `origin`;
/// values are row-major with x varying fastest. Zero outside the grid.
struct RasterDensity {
  Vec2 origin;
  double cell_width = 1.0;
  double cell_height = 1.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;
};

/// Density shape times a normalizing scale.
class Density {
 public:
  using Shape = std::variant<UniformDensity, GaussianMixtureDensity, RasterDensity>;

  Density() = default;
  explicit Density(Shape shape, double scale = 1.0);

  [[nodiscard]] double operator()(Vec2 z) const noexcept;
  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] Density scaled(double factor) const { return Density(shape_, scale_ * factor); }
  [[nodiscard]] std::string kind() const;

 private:
  Shape shape_;
  double scale_ = 1.0;
  // Cached inverse covariances and prefactors for the mixture.
  std::vector<std::array<double, 4>> inv_cov_;
  std::vector<double> prefactor_;
};

struct SensorRegion {
  Polygon polygon;
  Density density;
};

/// Validates convexity (clockwise input is reversed) and density parameters.
[[nodiscard]] SensorRegion make_region(Polygon polygon, Density density);

struct QuadratureOptions {
  /// Gauss points per axis of each triangle; exact to degree 2*order - 2.
  int order = 4;
  /// Side of the sub-grid used for smooth non-polynomial densities. 0 picks
  /// a quarter of the narrowest mixture standard deviation.
  double max_piece = 0.0;
};

/// Integral of f(z) * density(z) over a convex polygon.
[[nodiscard]] double integrate(const SensorRegion& region, const Polygon& poly, const QuadratureOptions& quad,
                               const std::function<double(Vec2)>& f);

/// Rescales the density so it integrates to one over the region.
[[nodiscard]] SensorRegion normalize_density(const SensorRegion& region, const QuadratureOptions& quad = {});

struct Cell {
  Polygon shape;
  std::size_t ix = 0;
  std::size_t iy = 0;
  double weight = 0.0;
  Vec2 com;
  /// Integral of |z - com|^2 density(z) over the cell.
  double inertia = 0.0;
};

inline constexpr double kDropThreshold = 1e-12;

struct Discretization {
  std::vector<Cell> cells;
  double grid_eps = 0.0;
  std::size_t dropped = 0;

  [[nodiscard]] WeightedPointSet as_point_set() const;
  [[nodiscard]] double total_weight() const;
  [[nodiscard]] double total_inertia() const;
};

/// Grid squares of side grid_eps anchored at the bounding box's lower-left
/// corner, clipped to the region. Cells lighter than drop_threshold are
/// discarded; throws InputError if nothing survives.
[[nodiscard]] Discretization discretize(const SensorRegion& region, double grid_eps,
                                        const QuadratureOptions& quad = {}, double drop_threshold = kDropThreshold);

struct CoverageOptions {
  QuadratureOptions quad;
  /// Positive selects the seeded Monte-Carlo estimator.
  std::uint64_t mc_samples = 0;
  std::uint64_t seed = 0;
};

/// Integral over the region of density times squared distance to the nearest
/// center. The deterministic mode clips the region to each Voronoi cell and
/// integrates each piece.
[[nodiscard]] double coverage_cost(const SensorRegion& region, const CenterSet& centers,
                                   const CoverageOptions& options = {});

struct Decomposition {
  double coverage = 0.0;  ///< H(C)
  double weighted_cost = 0.0;  ///< over the cell centers of mass
  double inertia = 0.0;  ///< sum of cell moments
  double rhs = 0.0;
  double gap = 0.0;  ///< |coverage - rhs|
};

/// Normalizes the density first, then compares H(C) with the discretized cost plus cell inertia.
[[nodiscard]] Decomposition decomposition_check(const SensorRegion& region, double grid_eps,
                                                const CenterSet& centers, const CoverageOptions& options = {});

enum class SensorSolver { ptas, kmeanspp_lloyd };

struct PlacementOptions {
  std::size_t k = 1;
  double epsilon = 0.5;
  double grid_eps = 0.05;
  SensorSolver solver = SensorSolver::ptas;
  std::uint64_t seed = 0;
  PtasOverrides ptas;
  CoverageOptions coverage;
};

struct Placement {
  ClusteringResult clustering;
  Discretization discretization;
  double coverage = 0.0;
  double weighted_cost = 0.0;
  double inertia = 0.0;
  std::vector<std::string> warnings;
};

/// Warning threshold on (sum of inertia) / coverage.
inline constexpr double kInertiaWarnFraction = 0.1;

/// Normalizes the density, then discretizes, solves weighted k-means on the
/// cell centers of mass and reports every cost component.
[[nodiscard]] Placement place_sensors(const SensorRegion& region, const PlacementOptions& options);

}  // namespace wkm

#endif  // WKM_SENSOR_HPP
