#include "wkm/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "wkm/error.hpp"

namespace wkm {

double signed_area(const Polygon& poly) noexcept {
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * twice;
}

Box bounding_box(const Polygon& poly) {
  if (poly.empty()) throw InputError("empty polygon");
  Box b{poly[0].x, poly[0].y, poly[0].x, poly[0].y};
  for (const auto& v : poly) {
    b.xmin = std::min(b.xmin, v.x);
    b.ymin = std::min(b.ymin, v.y);
    b.xmax = std::max(b.xmax, v.x);
    b.ymax = std::max(b.ymax, v.y);
  }
  return b;
}

Polygon box_polygon(const Box& box) {
  return {{box.xmin, box.ymin}, {box.xmax, box.ymin}, {box.xmax, box.ymax}, {box.xmin, box.ymax}};
}

bool is_convex_ccw(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  const double area = signed_area(poly);
  if (!(area > 0.0)) return false;
  const Box b = bounding_box(poly);
  const double scale = std::max(b.xmax - b.xmin, b.ymax - b.ymin);
  const double tol = 1e-12 * scale * scale;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = poly[i];
    const Vec2 q = poly[(i + 1) % n];
    const Vec2 r = poly[(i + 2) % n];
    if (cross(q - p, r - q) < -tol) return false;
  }
  // Left turns everywhere plus positive area can still wind twice; the turning
  // angle must total one revolution.
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = poly[(i + 1) % n] - poly[i];
    const Vec2 e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
    turning += std::atan2(cross(e1, e2), dot(e1, e2));
  }
  return std::fabs(turning - 2.0 * std::numbers::pi) < 1e-6;
}

namespace {

// Drops consecutive duplicates; anything without area becomes empty.
Polygon tidy(Polygon poly) {
  Polygon out;
  out.reserve(poly.size());
  for (const auto& v : poly) {
    if (out.empty() || !(v == out.back())) out.push_back(v);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  if (out.size() < 3 || !(signed_area(out) > 0.0)) out.clear();
  return out;
}

}  // namespace

Polygon clip_halfplane(const Polygon& poly, Vec2 normal, double offset) {
  Polygon out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = poly[i];
    const Vec2 q = poly[(i + 1) % n];
    const double fp = dot(normal, p) - offset;
    const double fq = dot(normal, q) - offset;
    if (fp <= 0.0) out.push_back(p);
    if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
      const double t = fp / (fp - fq);
      out.push_back(p + t * (q - p));
    }
  }
  return tidy(std::move(out));
}

Polygon clip_convex(const Polygon& subject, const Polygon& clipper) {
  Polygon out = subject;
  const std::size_t n = clipper.size();
  for (std::size_t i = 0; i < n && !out.empty(); ++i) {
    const Vec2 a = clipper[i];
    const Vec2 b = clipper[(i + 1) % n];
    const Vec2 e = b - a;
    // Inside of a counter-clockwise edge is on its left: cross(e, z - a) >= 0.
    const Vec2 normal{e.y, -e.x};
    out = clip_halfplane(out, normal, dot(normal, a));
  }
  return out;
}

Polygon clip_cell(const Box& square, const Polygon& region) { return clip_convex(box_polygon(square), region); }

void gauss_legendre_unit(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1 || order > 64) throw InputError("quadrature order must lie in [1, 64]");
  const auto n = static_cast<std::size_t>(order);
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double pj = ((2.0 * static_cast<double>(j) - 1.0) * x * p1 - (static_cast<double>(j) - 1.0) * p0) /
                          static_cast<double>(j);
        p0 = p1;
        p1 = pj;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] to [0, 1].
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.5;
}

TriangleRule::TriangleRule(int order) : order_(order) {
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre_unit(order, x, w);
  nodes_.reserve(x.size() * x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double u = x[i];
      const double v = x[j];
      nodes_.push_back({u * (1.0 - v), u * v, w[i] * w[j] * u});
    }
  }
}

const TriangleRule& TriangleRule::of_order(int order) {
  static std::array<std::unique_ptr<TriangleRule>, 65> cache;
  static std::mutex mutex;
  if (order < 1 || order > 64) throw InputError("quadrature order must lie in [1, 64]");
  const std::scoped_lock lock(mutex);
  auto& slot = cache[static_cast<std::size_t>(order)];
  if (!slot) slot.reset(new TriangleRule(order));
  return *slot;
}

}  // namespace wkm
