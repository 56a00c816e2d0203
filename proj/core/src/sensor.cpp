#include "wkm/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wkm/baselines.hpp"
#include "wkm/error.hpp"
#include "wkm/random.hpp"
#include "wkm/summation.hpp"

namespace wkm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Number of grid steps of size `step` covering `length`, ignoring round-off.
std::size_t steps_covering(double length, double step) {
  const double r = length / step;
  const double nearest = std::round(r);
  const double n = std::fabs(r - nearest) <= 1e-9 * std::max(1.0, r) ? nearest : std::ceil(r);
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

double narrowest_sigma(const GaussianMixtureDensity& mix) {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& c : mix.components) {
    const double a = c.cov[0];
    const double d = c.cov[3];
    const double b = 0.5 * (c.cov[1] + c.cov[2]);
    const double mean = 0.5 * (a + d);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + b * b));
    s = std::min(s, std::sqrt(mean - disc));
  }
  return s;
}

// Calls fn(piece) for convex pieces of `poly` on which the density is smooth
// enough for a fixed-order rule.
template <class Fn>
void for_each_piece(const Density& density, const Polygon& poly, const QuadratureOptions& quad, Fn&& fn) {
  if (poly.size() < 3) return;
  std::visit(Overloaded{
                 [&](const UniformDensity&) { fn(poly); },
                 [&](const RasterDensity& r) {
                   const Box b = bounding_box(poly);
                   const auto lo_x = static_cast<long long>(std::floor((b.xmin - r.origin.x) / r.cell_width));
                   const auto hi_x = static_cast<long long>(std::floor((b.xmax - r.origin.x) / r.cell_width));
                   const auto lo_y = static_cast<long long>(std::floor((b.ymin - r.origin.y) / r.cell_height));
                   const auto hi_y = static_cast<long long>(std::floor((b.ymax - r.origin.y) / r.cell_height));
                   for (long long iy = std::max(0LL, lo_y); iy <= std::min<long long>(hi_y, r.ny - 1); ++iy) {
                     for (long long ix = std::max(0LL, lo_x); ix <= std::min<long long>(hi_x, r.nx - 1); ++ix) {
                       const Box cell{r.origin.x + static_cast<double>(ix) * r.cell_width,
                                      r.origin.y + static_cast<double>(iy) * r.cell_height,
                                      r.origin.x + static_cast<double>(ix + 1) * r.cell_width,
                                      r.origin.y + static_cast<double>(iy + 1) * r.cell_height};
                       const Polygon piece = clip_cell(cell, poly);
                       if (!piece.empty()) fn(piece);
                     }
                   }
                 },
                 [&](const GaussianMixtureDensity& mix) {
                   const Box b = bounding_box(poly);
                   const double extent = std::max(b.xmax - b.xmin, b.ymax - b.ymin);
                   double h = quad.max_piece > 0.0 ? quad.max_piece : 0.25 * narrowest_sigma(mix);
                   h = std::max(h, extent / 256.0);
                   // Anchored at the origin so neighbouring polygons share piece boundaries.
                   const auto lo_x = static_cast<long long>(std::floor(b.xmin / h));
                   const auto hi_x = static_cast<long long>(std::floor(b.xmax / h));
                   const auto lo_y = static_cast<long long>(std::floor(b.ymin / h));
                   const auto hi_y = static_cast<long long>(std::floor(b.ymax / h));
                   if (lo_x == hi_x && lo_y == hi_y) {
                     fn(poly);
                     return;
                   }
                   for (long long iy = lo_y; iy <= hi_y; ++iy) {
                     for (long long ix = lo_x; ix <= hi_x; ++ix) {
                       const Box cell{static_cast<double>(ix) * h, static_cast<double>(iy) * h,
                                      static_cast<double>(ix + 1) * h, static_cast<double>(iy + 1) * h};
                       const Polygon piece = clip_cell(cell, poly);
                       if (!piece.empty()) fn(piece);
                     }
                   }
                 },
             },
             density.shape());
}

// fn(z, w) with w = node weight * density(z).
template <class Fn>
void for_each_density_node(const Density& density, const Polygon& poly, const QuadratureOptions& quad, Fn&& fn) {
  const TriangleRule& rule = TriangleRule::of_order(quad.order);
  for_each_piece(density, poly, quad, [&](const Polygon& piece) {
    for_each_polygon_node(piece, rule, [&](Vec2 z, double w) { fn(z, w * density(z)); });
  });
}

bool contains(const Polygon& convex, Vec2 z) {
  for (std::size_t i = 0; i < convex.size(); ++i) {
    const Vec2 a = convex[i];
    const Vec2 b = convex[(i + 1) % convex.size()];
    if (cross(b - a, z - a) < 0.0) return false;
  }
  return true;
}

Vec2 center_xy(const CenterSet& centers, std::size_t i) { return {centers.center(i)[0], centers.center(i)[1]}; }

}  // namespace

Density::Density(Shape shape, double scale) : shape_(std::move(shape)), scale_(scale) {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw InputError("density scale must be positive and finite");
  std::visit(Overloaded{
                 [](const UniformDensity&) {},
                 [this](const GaussianMixtureDensity& mix) {
                   if (mix.components.empty()) throw InputError("gaussian mixture needs at least one component");
                   double total = 0.0;
                   for (const auto& c : mix.components) {
                     const auto& s = c.cov;
                     const double det = s[0] * s[3] - s[1] * s[2];
                     if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
                       throw InputError("mixture weights must be nonnegative");
                     }
                     if (std::fabs(s[1] - s[2]) > 1e-12 * (std::fabs(s[0]) + std::fabs(s[3])) || !(s[0] > 0.0) ||
                         !(det > 0.0)) {
                       throw InputError("mixture covariance must be symmetric positive definite");
                     }
                     total += c.weight;
                     inv_cov_.push_back({s[3] / det, -s[1] / det, -s[2] / det, s[0] / det});
                     prefactor_.push_back(c.weight / (2.0 * std::numbers::pi * std::sqrt(det)));
                   }
                   if (!(total > 0.0)) throw InputError("mixture weights sum to zero");
                 },
                 [](const RasterDensity& r) {
                   if (r.nx == 0 || r.ny == 0 || r.values.size() != r.nx * r.ny) {
                     throw InputError("raster needs nx * ny values");
                   }
                   if (!(r.cell_width > 0.0) || !(r.cell_height > 0.0)) throw InputError("raster cell size must be positive");
                   for (double v : r.values) {
                     if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("raster values must be nonnegative");
                   }
                 },
             },
             shape_);
}

double Density::operator()(Vec2 z) const noexcept {
  return scale_ * std::visit(Overloaded{
                                 [](const UniformDensity&) { return 1.0; },
                                 [&](const GaussianMixtureDensity& mix) {
                                   double v = 0.0;
                                   for (std::size_t i = 0; i < mix.components.size(); ++i) {
                                     const Vec2 d = z - mix.components[i].mean;
                                     const auto& m = inv_cov_[i];
                                     const double q = d.x * (m[0] * d.x + m[1] * d.y) + d.y * (m[2] * d.x + m[3] * d.y);
                                     v += prefactor_[i] * std::exp(-0.5 * q);
                                   }
                                   return v;
                                 },
                                 [&](const RasterDensity& r) {
                                   const double fx = std::floor((z.x - r.origin.x) / r.cell_width);
                                   const double fy = std::floor((z.y - r.origin.y) / r.cell_height);
                                   if (fx < 0.0 || fy < 0.0 || fx >= static_cast<double>(r.nx) ||
                                       fy >= static_cast<double>(r.ny)) {
                                     return 0.0;
                                   }
                                   return r.values[static_cast<std::size_t>(fy) * r.nx + static_cast<std::size_t>(fx)];
                                 },
                             },
                             shape_);
}

std::string Density::kind() const {
  return std::visit(Overloaded{
                        [](const UniformDensity&) { return std::string("uniform"); },
                        [](const GaussianMixtureDensity&) { return std::string("gaussian_mixture"); },
                        [](const RasterDensity&) { return std::string("raster"); },
                    },
                    shape_);
}

SensorRegion make_region(Polygon polygon, Density density) {
  for (const auto& v : polygon) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InputError("polygon vertices must be finite");
  }
  if (signed_area(polygon) < 0.0) std::reverse(polygon.begin(), polygon.end());
  if (!is_convex_ccw(polygon)) throw InputError("region must be convex");
  return {std::move(polygon), std::move(density)};
}

double integrate(const SensorRegion& region, const Polygon& poly, const QuadratureOptions& quad,
                 const std::function<double(Vec2)>& f) {
  CompensatedSum s;
  for_each_density_node(region.density, poly, quad, [&](Vec2 z, double w) { s.add(w * f(z)); });
  return s.value();
}

SensorRegion normalize_density(const SensorRegion& region, const QuadratureOptions& quad) {
  CompensatedSum mass;
  for_each_density_node(region.density, region.polygon, quad, [&](Vec2, double w) { mass.add(w); });
  const double m = mass.value();
  if (!(m > 0.0) || !std::isfinite(m)) throw InputError("density has no mass inside the region");
  if (const auto* mix = std::get_if<GaussianMixtureDensity>(&region.density.shape())) {
    double reference = 0.0;
    for (const auto& c : mix->components) reference += c.weight;
    if (m < 1e-9 * reference * region.density.scale()) {
      throw InputError("density mass inside the region is negligible; normalization is ill-conditioned");
    }
  }
  return {region.polygon, region.density.scaled(1.0 / m)};
}

WeightedPointSet Discretization::as_point_set() const {
  std::vector<double> coords;
  std::vector<double> weights;
  coords.reserve(cells.size() * 2);
  weights.reserve(cells.size());
  for (const auto& c : cells) {
    coords.push_back(c.com.x);
    coords.push_back(c.com.y);
    weights.push_back(c.weight);
  }
  return {2, std::move(coords), std::move(weights)};
}

double Discretization::total_weight() const {
  CompensatedSum s;
  for (const auto& c : cells) s.add(c.weight);
  return s.value();
}

double Discretization::total_inertia() const {
  CompensatedSum s;
  for (const auto& c : cells) s.add(c.inertia);
  return s.value();
}

Discretization discretize(const SensorRegion& region, double grid_eps, const QuadratureOptions& quad,
                          double drop_threshold) {
  if (!(grid_eps > 0.0) || !std::isfinite(grid_eps)) throw InputError("grid_eps must be positive");
  const Box b = bounding_box(region.polygon);
  const std::size_t nx = steps_covering(b.xmax - b.xmin, grid_eps);
  const std::size_t ny = steps_covering(b.ymax - b.ymin, grid_eps);
  const double min_area = 1e-14 * grid_eps * grid_eps;

  Discretization out;
  out.grid_eps = grid_eps;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const Box square{b.xmin + static_cast<double>(ix) * grid_eps, b.ymin + static_cast<double>(iy) * grid_eps,
                       b.xmin + static_cast<double>(ix + 1) * grid_eps, b.ymin + static_cast<double>(iy + 1) * grid_eps};
      Polygon shape = clip_cell(square, region.polygon);
      if (shape.empty() || signed_area(shape) <= min_area) continue;

      CompensatedSum mass;
      CompensatedSum mx;
      CompensatedSum my;
      for_each_density_node(region.density, shape, quad, [&](Vec2 z, double w) {
        mass.add(w);
        mx.add(w * z.x);
        my.add(w * z.y);
      });
      const double m = mass.value();
      if (!(m >= drop_threshold)) {
        ++out.dropped;
        continue;
      }
      const Vec2 com{mx.value() / m, my.value() / m};
      CompensatedSum inertia;
      for_each_density_node(region.density, shape, quad, [&](Vec2 z, double w) { inertia.add(w * norm2(z - com)); });
      out.cells.push_back({std::move(shape), ix, iy, m, com, inertia.value()});
    }
  }
  if (out.cells.empty()) throw InputError("grid too coarse or density degenerate");
  return out;
}

double coverage_cost(const SensorRegion& region, const CenterSet& centers, const CoverageOptions& options) {
  if (centers.empty()) throw InputError("no centers");
  if (centers.dim() != 2) throw InputError("sensor centers must be two-dimensional");

  if (options.mc_samples > 0) {
    const Box b = bounding_box(region.polygon);
    const double box_area = (b.xmax - b.xmin) * (b.ymax - b.ymin);
    RandomSource rng(options.seed);
    CompensatedSum acc;
    for (std::uint64_t s = 0; s < options.mc_samples; ++s) {
      const Vec2 z{b.xmin + rng.uniform() * (b.xmax - b.xmin), b.ymin + rng.uniform() * (b.ymax - b.ymin)};
      if (!contains(region.polygon, z)) continue;
      const double zz[2] = {z.x, z.y};
      acc.add(region.density(z) * nearest_center(zz, centers).sq_dist);
    }
    return box_area * acc.value() / static_cast<double>(options.mc_samples);
  }

  CompensatedSum total;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Vec2 ci = center_xy(centers, i);
    bool shadowed = false;
    Polygon cell = region.polygon;
    for (std::size_t j = 0; j < centers.size() && !cell.empty(); ++j) {
      if (j == i) continue;
      const Vec2 cj = center_xy(centers, j);
      if (cj == ci) {
        // Coincident centers: the lowest index owns the cell.
        if (j < i) shadowed = true;
        continue;
      }
      cell = clip_halfplane(cell, 2.0 * (cj - ci), norm2(cj) - norm2(ci));
    }
    if (shadowed || cell.empty()) continue;
    for_each_density_node(region.density, cell, options.quad, [&](Vec2 z, double w) { total.add(w * norm2(z - ci)); });
  }
  return total.value();
}

Decomposition decomposition_check(const SensorRegion& raw, double grid_eps, const CenterSet& centers,
                                  const CoverageOptions& options) {
  const SensorRegion region = normalize_density(raw, options.quad);
  const Discretization disc = discretize(region, grid_eps, options.quad);
  Decomposition d;
  d.coverage = coverage_cost(region, centers, options);
  d.weighted_cost = weighted_cost(disc.as_point_set(), centers);
  d.inertia = disc.total_inertia();
  d.rhs = d.weighted_cost + d.inertia;
  d.gap = std::fabs(d.coverage - d.rhs);
  return d;
}

Placement place_sensors(const SensorRegion& raw, const PlacementOptions& options) {
  if (options.k == 0) throw InputError("k must be positive");
  const SensorRegion region = normalize_density(raw, options.coverage.quad);
  Placement out;
  out.discretization = discretize(region, options.grid_eps, options.coverage.quad);
  const WeightedPointSet points = out.discretization.as_point_set();

  switch (options.solver) {
    case SensorSolver::ptas:
      out.clustering = solve(points, options.k, options.epsilon, options.ptas, options.seed);
      break;
    case SensorSolver::kmeanspp_lloyd: {
      RandomSource rng(options.seed);
      const CenterSet init = kmeanspp_seed(points, options.k, rng);
      out.clustering = lloyd_descend(points, init);
      out.clustering.meta.solver = "kmeanspp-lloyd";
      out.clustering.meta.seed = options.seed;
      break;
    }
  }

  out.coverage = coverage_cost(region, out.clustering.centers, options.coverage);
  out.weighted_cost = out.clustering.cost;
  out.inertia = out.discretization.total_inertia();

  const Box b = bounding_box(region.polygon);
  if (out.discretization.cells.size() == 1 || options.grid_eps >= std::max(b.xmax - b.xmin, b.ymax - b.ymin)) {
    out.warnings.push_back("grid_eps " + format_number(options.grid_eps) +
                           " is as coarse as the region; the discretization has " +
                           std::to_string(out.discretization.cells.size()) + " cell(s)");
  }
  if (out.inertia > kInertiaWarnFraction * out.coverage) {
    out.warnings.push_back("cell inertia " + format_number(out.inertia) + " exceeds " +
                           format_number(kInertiaWarnFraction * 100.0) + "% of coverage cost " +
                           format_number(out.coverage) + "; refine grid_eps");
  }
  return out;
}

}  // namespace wkm
