#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "reference.hpp"
#include "wkm/error.hpp"
#include "wkm/geometry.hpp"
#include "wkm/oracle.hpp"
#include "wkm/sensor.hpp"

using namespace wkm;

namespace {

const Polygon kUnitSquare{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

SensorRegion unit_square() { return make_region(kUnitSquare, Density(UniformDensity{})); }

SensorRegion hexagon() {
  Polygon hex;
  for (int i = 0; i < 6; ++i) {
    const double a = std::numbers::pi / 3 * i + 0.1;
    hex.push_back({1.3 * std::cos(a) + 0.2, 1.3 * std::sin(a) - 0.1});
  }
  return make_region(hex, Density(UniformDensity{}));
}

GaussianMixtureDensity two_bumps() {
  GaussianMixtureDensity mix;
  mix.components.push_back({{0.3, 0.4}, {0.04, 0.01, 0.01, 0.03}, 2.0});
  mix.components.push_back({{0.75, 0.7}, {0.02, 0.0, 0.0, 0.05}, 1.0});
  return mix;
}

/// Independent Gaussian-mixture evaluation for the reference integrals.
double mixture_value(const GaussianMixtureDensity& mix, double x, double y) {
  double total_w = 0;
  for (const auto& c : mix.components) total_w += c.weight;
  double v = 0;
  for (const auto& c : mix.components) {
    const double a = c.cov[0], b = c.cov[1], d = c.cov[3];
    const double det = a * d - b * b;
    const double dx = x - c.mean.x, dy = y - c.mean.y;
    const double q = (d * dx * dx - 2 * b * dx * dy + a * dy * dy) / det;
    v += c.weight / total_w * std::exp(-0.5 * q) / (2 * std::numbers::pi * std::sqrt(det));
  }
  return v;
}

std::vector<ref::XY> xy(const Polygon& p) {
  std::vector<ref::XY> out;
  for (auto v : p) out.push_back({v.x, v.y});
  return out;
}

/// Regression instance: four equal point-like masses (single raster cells)
/// on a 4x4 region, clustered with k = 3. The optimum merges the two adjacent
/// cells, and no Voronoi edge of the optimum crosses a hot cell, so the
/// discrete optimum is also the coverage optimum.
SensorRegion hot_cells() {
  RasterDensity r;
  r.origin = {0, 0};
  r.nx = 4;
  r.ny = 4;
  r.values.assign(16, 0.0);
  r.values[0] = r.values[1] = 1.0;  // (0,0), (1,0)
  r.values[15] = 1.0;               // (3,3)
  r.values[12] = 1.0;               // (0,3)
  return make_region({{0, 0}, {4, 0}, {4, 4}, {0, 4}}, Density(r));
}

}  // namespace

TEST_CASE("make_region validates convexity and orientation") {
  CHECK_THROWS_WITH_AS((void)make_region({{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}}, Density(UniformDensity{})),
                       "region must be convex", InputError);
  CHECK_THROWS_AS((void)make_region({{0, 0}, {1, 0}, {2, 0}}, Density(UniformDensity{})), InputError);
  CHECK_THROWS_AS((void)make_region({{0, 0}, {1, 0}}, Density(UniformDensity{})), InputError);
  const auto cw = make_region({{0, 0}, {0, 1}, {1, 1}, {1, 0}}, Density(UniformDensity{}));
  CHECK(signed_area(cw.polygon) == doctest::Approx(1.0));
  // Collinear points along an edge are tolerated.
  CHECK_NOTHROW((void)make_region({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}}, Density(UniformDensity{})));
}

TEST_CASE("density validation") {
  GaussianMixtureDensity bad;
  bad.components.push_back({{0, 0}, {1, 2, 2, 1}, 1.0});
  CHECK_THROWS_AS((void)Density{bad}, InputError);
  CHECK_THROWS_AS((void)Density{GaussianMixtureDensity{}}, InputError);
  RasterDensity r;
  r.nx = 2;
  r.ny = 2;
  r.values = {1, 2, 3};
  CHECK_THROWS_AS((void)Density{r}, InputError);
  r.values = {1, -2, 3, 4};
  CHECK_THROWS_AS((void)Density{r}, InputError);
}

TEST_CASE("clip_cell examples") {
  const auto inside = clip_cell({0.2, 0.2, 0.4, 0.4}, kUnitSquare);
  CHECK(signed_area(inside) == doctest::Approx(0.04).epsilon(1e-14));
  CHECK(clip_cell({2, 2, 3, 3}, kUnitSquare).empty());
  const auto half = clip_halfplane(kUnitSquare, {1, 0}, 0.5);
  const auto m = ref::moments(xy(half));
  CHECK(m.area == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.cx == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(signed_area(half) > 0);
  // Touching along an edge has no area.
  CHECK(clip_cell({1, 0, 2, 1}, kUnitSquare).empty());
}

TEST_CASE("clipping a triangle against the unit square") {
  const Polygon tri{{-0.5, -0.5}, {1.5, 0.2}, {0.2, 1.5}};
  const auto got = clip_convex(tri, kUnitSquare);
  CHECK(is_convex_ccw(got));
  // Midpoint-rule area of the intersection as the reference.
  auto inside_tri = [&](double x, double y) {
    for (std::size_t i = 0; i < 3; ++i) {
      const auto a = tri[i], b = tri[(i + 1) % 3];
      if ((b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x) < 0) return 0.0;
    }
    return 1.0;
  };
  const double area = static_cast<double>(ref::midpoint_rect(0, 0, 1, 1, 2000, inside_tri));
  CHECK(signed_area(got) == doctest::Approx(area).epsilon(1e-3));
}

TEST_CASE("triangle rule is exact to degree 2q - 2") {
  // Integral of s^a t^b over the reference triangle is a! b! / (a + b + 2)!.
  auto fact = [](int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  for (int q = 1; q <= 6; ++q) {
    const auto& rule = TriangleRule::of_order(q);
    for (int a = 0; a <= 2 * q - 2; ++a) {
      for (int b = 0; a + b <= 2 * q - 2; ++b) {
        double sum = 0;
        for (const auto& n : rule.nodes()) sum += n.weight * std::pow(n.s, a) * std::pow(n.t, b);
        CHECK(sum == doctest::Approx(fact(a) * fact(b) / fact(a + b + 2)).epsilon(1e-13));
      }
    }
  }
  CHECK_THROWS_AS((void)TriangleRule::of_order(0), InputError);
}

TEST_CASE("normalize_density examples") {
  const auto u = normalize_density(unit_square());
  CHECK(u.density({0.3, 0.3}) == doctest::Approx(1.0).epsilon(1e-14));

  const auto big = normalize_density(make_region({{0, 0}, {2, 0}, {2, 2}, {0, 2}}, Density(UniformDensity{})));
  CHECK(big.density({1, 1}) == doctest::Approx(0.25).epsilon(1e-14));

  GaussianMixtureDensity far;
  far.components.push_back({{50, 50}, {0.01, 0, 0, 0.01}, 1.0});
  CHECK_THROWS_AS((void)normalize_density(make_region(kUnitSquare, Density(far))), InputError);

  RasterDensity zero;
  zero.origin = {5, 5};
  zero.nx = zero.ny = 1;
  zero.values = {1.0};
  CHECK_THROWS_AS((void)normalize_density(make_region(kUnitSquare, Density(zero))), InputError);
}

TEST_CASE("discretize examples on the unit square") {
  const auto d = discretize(unit_square(), 0.5);
  REQUIRE(d.cells.size() == 4);
  for (const auto& c : d.cells) {
    CHECK(c.weight == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(c.com.x == doctest::Approx(0.25 + 0.5 * c.ix).epsilon(1e-14));
    CHECK(c.com.y == doctest::Approx(0.25 + 0.5 * c.iy).epsilon(1e-14));
    CHECK(c.inertia == doctest::Approx(1.0 / 96).epsilon(1e-13));
  }
  CHECK(d.total_weight() == doctest::Approx(1.0).epsilon(1e-14));

  const auto one = discretize(unit_square(), 1.0);
  REQUIRE(one.cells.size() == 1);
  CHECK(one.cells[0].weight == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(one.cells[0].com.x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(one.cells[0].inertia == doctest::Approx(1.0 / 6).epsilon(1e-13));

  CHECK_THROWS_AS((void)discretize(unit_square(), 0.0), InputError);
}

TEST_CASE("uniform cells match closed-form polygon moments") {
  const auto region = normalize_density(hexagon());
  const double area = ref::moments(xy(region.polygon)).area;
  const auto d = discretize(region, 0.23);
  double covered = 0;
  bool saw_partial = false;
  for (const auto& c : d.cells) {
    const auto m = ref::moments(xy(c.shape));
    covered += m.area;
    saw_partial = saw_partial || c.shape.size() != 4 || m.area < 0.23 * 0.23 * (1 - 1e-9);
    CHECK(c.weight == doctest::Approx(m.area / area).epsilon(1e-12));
    CHECK(c.com.x == doctest::Approx(m.cx).epsilon(1e-12));
    CHECK(c.com.y == doctest::Approx(m.cy).epsilon(1e-12));
    CHECK(c.inertia == doctest::Approx(m.polar_about_centroid / area).epsilon(1e-10));
  }
  CHECK(saw_partial);
  CHECK(covered == doctest::Approx(area).epsilon(1e-12));
  CHECK(d.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gaussian mixture cells match a fine midpoint rule") {
  const auto mix = two_bumps();
  const auto region = normalize_density(make_region(kUnitSquare, Density(mix)));
  const auto d = discretize(region, 0.25);
  REQUIRE(d.cells.size() == 16);
  const double mass =
      static_cast<double>(ref::midpoint_rect(0, 0, 1, 1, 1600, [&](double x, double y) { return mixture_value(mix, x, y); }));
  for (const auto& c : d.cells) {
    const double x0 = 0.25 * c.ix, y0 = 0.25 * c.iy;
    const double w = static_cast<double>(ref::midpoint_rect(x0, y0, x0 + 0.25, y0 + 0.25, 400, [&](double x, double y) {
                       return mixture_value(mix, x, y);
                     })) / mass;
    CHECK(c.weight == doctest::Approx(w).epsilon(1e-5));
  }
}

TEST_CASE("raster cells aligned with the grid carry the raster mass") {
  RasterDensity r;
  r.origin = {0, 0};
  r.cell_width = r.cell_height = 0.5;
  r.nx = r.ny = 2;
  r.values = {1, 2, 3, 4};
  const auto region = normalize_density(make_region(kUnitSquare, Density(r)));
  const auto d = discretize(region, 0.5);
  REQUIRE(d.cells.size() == 4);
  for (const auto& c : d.cells) {
    CHECK(c.weight == doctest::Approx(r.values[c.iy * 2 + c.ix] / 10.0).epsilon(1e-13));
    CHECK(c.inertia == doctest::Approx(c.weight * 0.25 / 6).epsilon(1e-12));
  }
  // A raster that straddles grid lines is split exactly at its cell edges.
  const auto fine = discretize(region, 0.3);
  CHECK(fine.total_weight() == doctest::Approx(1.0).epsilon(1e-13));
  for (const auto& c : fine.cells) {
    const double x0 = 0.3 * c.ix, y0 = 0.3 * c.iy;
    const double w = static_cast<double>(ref::midpoint_rect(x0, y0, std::min(1.0, x0 + 0.3), std::min(1.0, y0 + 0.3),
                                                            600, [&](double x, double y) {
                                                              return r.values[(y >= 0.5) * 2 + (x >= 0.5)] / 2.5;
                                                            }));
    CHECK(c.weight == doctest::Approx(w).epsilon(1e-3));
  }
}

TEST_CASE("mass is conserved across densities and grids") {
  RasterDensity r;
  r.origin = {-0.1, -0.2};
  r.cell_width = 0.37;
  r.cell_height = 0.29;
  r.nx = 4;
  r.ny = 5;
  for (int i = 0; i < 20; ++i) r.values.push_back(1 + (i * 7) % 5);
  const std::vector<Density> densities{Density(UniformDensity{}), Density(two_bumps()), Density(r)};
  for (const auto& dens : densities) {
    const auto region = normalize_density(make_region(kUnitSquare, dens));
    for (double g : {0.3, 0.1, 0.05}) {
      CAPTURE(g);
      CHECK(std::fabs(discretize(region, g).total_weight() - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("drop threshold discards empty cells") {
  RasterDensity r;
  r.origin = {0, 0};
  r.cell_width = r.cell_height = 0.5;
  r.nx = r.ny = 2;
  r.values = {1, 0, 0, 0};
  const auto d = discretize(normalize_density(make_region(kUnitSquare, Density(r))), 0.5);
  CHECK(d.cells.size() == 1);
  CHECK(d.dropped == 3);
}

TEST_CASE("coverage_cost examples") {
  const auto sq = unit_square();
  CHECK(coverage_cost(sq, CenterSet::from_rows({{0.5, 0.5}})) == doctest::Approx(1.0 / 6).epsilon(1e-13));
  CHECK(coverage_cost(sq, CenterSet::from_rows({{0.25, 0.5}, {0.75, 0.5}})) ==
        doctest::Approx(1.0 / 24 + 1.0 / 16).epsilon(1e-13));
  // Shrinking the region around a center drives the cost to zero.
  const auto tiny = make_region({{0.5, 0.5}, {0.5001, 0.5}, {0.5001, 0.5001}, {0.5, 0.5001}}, Density(UniformDensity{}));
  CHECK(coverage_cost(tiny, CenterSet::from_rows({{0.5, 0.5}})) < 1e-15);
  // Duplicated centers change nothing.
  CHECK(coverage_cost(sq, CenterSet::from_rows({{0.5, 0.5}, {0.5, 0.5}})) == doctest::Approx(1.0 / 6).epsilon(1e-13));
}

TEST_CASE("coverage_cost agrees with a midpoint-rule oracle") {
  const auto sq = unit_square();
  const std::vector<std::vector<Point>> configs{
      {{0.2, 0.3}, {0.7, 0.8}}, {{0.1, 0.1}, {0.9, 0.2}, {0.4, 0.75}}, {{1.5, 0.5}, {-0.3, 0.2}}};
  for (const auto& rows : configs) {
    auto f = [&](double x, double y) {
      double best = 1e300;
      for (const auto& c : rows) best = std::min(best, (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]));
      return best;
    };
    const double want = static_cast<double>(ref::midpoint_rect(0, 0, 1, 1, 1500, f));
    CHECK(coverage_cost(sq, CenterSet::from_rows(rows)) == doctest::Approx(want).epsilon(1e-5));
  }
}

TEST_CASE("Monte-Carlo coverage agrees with quadrature") {
  const auto region = normalize_density(make_region(kUnitSquare, Density(two_bumps())));
  const auto centers = CenterSet::from_rows({{0.3, 0.4}, {0.8, 0.6}});
  CoverageOptions mc;
  mc.mc_samples = 400000;
  mc.seed = 5;
  const double exact = coverage_cost(region, centers);
  CHECK(coverage_cost(region, centers, mc) == doctest::Approx(exact).epsilon(0.02));
  CHECK(coverage_cost(region, centers, mc) == coverage_cost(region, centers, mc));
}

TEST_CASE("coverage quadrature converges with the order") {
  const auto region = normalize_density(make_region(kUnitSquare, Density(two_bumps())));
  const auto centers = CenterSet::from_rows({{0.31, 0.42}, {0.77, 0.66}, {0.1, 0.9}});
  std::vector<double> h;
  for (int q : {1, 2, 4, 8, 16}) {
    CoverageOptions o;
    o.quad.order = q;
    h.push_back(coverage_cost(region, centers, o));
  }
  std::vector<double> diffs;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) diffs.push_back(std::fabs(h[i] - h[i + 1]));
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i) CHECK(diffs[i + 1] < diffs[i]);
  CHECK(diffs.back() <= 1e-6);
}

TEST_CASE("decomposition examples") {
  const auto sq = unit_square();
  const auto one = decomposition_check(sq, 0.5, CenterSet::from_rows({{0.5, 0.5}}));
  CHECK(one.coverage == doctest::Approx(1.0 / 6).epsilon(1e-12));
  CHECK(one.weighted_cost == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(one.inertia == doctest::Approx(1.0 / 24).epsilon(1e-12));
  CHECK(one.gap <= 1e-6);

  const auto k1 = decomposition_check(hexagon(), 0.17, CenterSet::from_rows({{0.4, -0.3}}));
  CHECK(k1.gap <= 1e-12);

  const auto two = decomposition_check(sq, 0.5, CenterSet::from_rows({{0.25, 0.5}, {0.75, 0.5}}));
  CHECK(two.gap <= 1e-6);
}

TEST_CASE("decomposition gap shrinks with the grid for generic centers") {
  const auto sq = unit_square();
  const auto centers = CenterSet::from_rows({{0.23, 0.31}, {0.71, 0.64}, {0.35, 0.88}});
  double prev = INFINITY;
  for (double g : {0.2, 0.1, 0.05}) {
    const auto d = decomposition_check(sq, g, centers);
    CAPTURE(g);
    CHECK(d.gap < prev);
    CHECK(d.coverage <= d.rhs + 1e-12);
    prev = d.gap;
  }
}

TEST_CASE("place_sensors examples") {
  PlacementOptions o;
  o.k = 1;
  o.ptas.c1 = 8;
  o.ptas.c2 = 4;
  const auto p = place_sensors(unit_square(), o);
  const auto c = p.clustering.centers.center(0);
  CHECK(std::hypot(c[0] - 0.5, c[1] - 0.5) <= 0.02);
  CHECK(p.coverage <= 1.5 * (1.0 / 6) + 1e-6);
  CHECK(std::fabs(p.coverage - 1.0 / 6) <= 0.02 / 6);
  CHECK(p.warnings.empty());

  o.grid_eps = 1.0;
  const auto coarse = place_sensors(unit_square(), o);
  CHECK(coarse.clustering.centers.center(0)[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(coarse.weighted_cost == 0.0);
  CHECK(coarse.inertia == doctest::Approx(1.0 / 6).epsilon(1e-13));
  CHECK(coarse.coverage == doctest::Approx(1.0 / 6).epsilon(1e-13));
  CHECK(coarse.warnings.size() == 2);

  o.grid_eps = 3.0;
  CHECK(place_sensors(unit_square(), o).discretization.cells.size() == 1);
}

TEST_CASE("two mass concentrations get one sensor each") {
  RasterDensity r;
  r.origin = {0, 0};
  r.nx = 5;
  r.ny = 1;
  r.values = {1, 0, 0, 0, 1};
  const auto region = make_region({{0, 0}, {5, 0}, {5, 1}, {0, 1}}, Density(r));
  PlacementOptions o;
  o.k = 2;
  o.grid_eps = 0.5;
  o.ptas.c1 = 8;
  o.ptas.c2 = 4;
  const auto p = place_sensors(region, o);
  const auto points = p.discretization.as_point_set();
  REQUIRE(points.size() <= 14);
  const auto exact = brute_force_opt(points, 2);
  CHECK(p.weighted_cost <= 1.5 * exact.cost + 1e-12);
  std::vector<double> xs{p.clustering.centers.center(0)[0], p.clustering.centers.center(1)[0]};
  std::sort(xs.begin(), xs.end());
  CHECK(xs[0] == doctest::Approx(0.5).epsilon(0.1));
  CHECK(xs[1] == doctest::Approx(4.5).epsilon(0.02));
}

TEST_CASE("inertia above a tenth of the coverage cost is flagged") {
  PlacementOptions o;
  o.k = 4;
  o.grid_eps = 0.5;
  o.solver = SensorSolver::kmeanspp_lloyd;
  const auto p = place_sensors(unit_square(), o);
  CHECK(p.weighted_cost == doctest::Approx(0.0).epsilon(1e-15));
  REQUIRE(p.warnings.size() == 1);
  CHECK(p.warnings[0].find("inertia") != std::string::npos);
}

TEST_CASE("PTAS placement never loses to k-means++ with Lloyd on the regression instance") {
  const auto region = hot_cells();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PlacementOptions o;
    o.k = 3;
    o.grid_eps = 1.0;
    o.seed = seed;
    o.ptas.c1 = 8;
    // M = 2: a one-and-one pair lands exactly on the merged cells' midpoint.
    o.ptas.c2 = 1;
    const double ptas = place_sensors(region, o).coverage;
    o.solver = SensorSolver::kmeanspp_lloyd;
    const double lloyd = place_sensors(region, o).coverage;
    CAPTURE(seed);
    CHECK(ptas <= lloyd + 1e-9);
  }
}

TEST_CASE("placement is independent of the thread count") {
  const auto region = make_region(kUnitSquare, Density(two_bumps()));
  PlacementOptions o;
  o.k = 2;
  o.grid_eps = 0.1;
  o.seed = 3;
  o.ptas.c1 = 8;
  o.ptas.c2 = 4;
  o.ptas.threads = 1;
  const auto a = place_sensors(region, o);
  o.ptas.threads = 6;
  const auto b = place_sensors(region, o);
  CHECK(a.clustering.centers == b.clustering.centers);
  CHECK(a.coverage == b.coverage);
}
