#ifndef WKM_GEOMETRY_HPP
#define WKM_GEOMETRY_HPP

#include <cstddef>
#include <vector>

/**
 * @file geometry.hpp
 * @brief Planar convex polygons and product quadrature on triangles.
 */

namespace wkm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) noexcept { return dot(a, a); }

/// Vertex list; counter-clockwise unless stated otherwise.
using Polygon = std::vector<Vec2>;

struct Box {
  double xmin, ymin, xmax, ymax;
};

/// Shoelace area, positive for counter-clockwise order.
[[nodiscard]] double signed_area(const Polygon& poly) noexcept;
[[nodiscard]] Box bounding_box(const Polygon& poly);
[[nodiscard]] Polygon box_polygon(const Box& box);

/// True when every turn is a left turn (collinear vertices tolerated) and the
/// area is positive.
[[nodiscard]] bool is_convex_ccw(const Polygon& poly);

/// Part of `poly` with dot(normal, z) <= offset.
[[nodiscard]] Polygon clip_halfplane(const Polygon& poly, Vec2 normal, double offset);

/// Sutherland-Hodgman against a convex counter-clockwise clipper. Returns an
/// empty polygon when the overlap has no area.
[[nodiscard]] Polygon clip_convex(const Polygon& subject, const Polygon& clipper);

/// Axis-aligned square (or any box) intersected with a convex polygon.
[[nodiscard]] Polygon clip_cell(const Box& square, const Polygon& region);

/**
 * Collapsed Gauss-Legendre product rule on the reference triangle
 * {s, t >= 0, s + t <= 1}. With `order` points per axis it integrates
 * polynomials of total degree up to 2 * order - 2 exactly.
 */
class TriangleRule {
 public:
  struct Node {
    double s, t, weight;
  };

  /// Cached per order; order must lie in [1, 64].
  static const TriangleRule& of_order(int order);

  [[nodiscard]] int order() const noexcept { return order_; }
  [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }

 private:
  explicit TriangleRule(int order);
  int order_;
  std::vector<Node> nodes_;
};

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int order, std::vector<double>& nodes, std::vector<double>& weights);

/**
 * Calls fn(z, w) for every quadrature node of a fan triangulation of a convex
 * polygon (fan from the first vertex), with w the node's area weight.
 */
template <class Fn>
void for_each_polygon_node(const Polygon& poly, const TriangleRule& rule, Fn&& fn) {
  if (poly.size() < 3) return;
  const Vec2 a = poly[0];
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const Vec2 e1 = poly[i] - a;
    const Vec2 e2 = poly[i + 1] - a;
    const double jac = cross(e1, e2);
    if (jac <= 0.0) continue;
    for (const auto& node : rule.nodes()) {
      fn(a + node.s * e1 + node.t * e2, node.weight * jac);
    }
  }
}

}  // namespace wkm

#endif  // WKM_GEOMETRY_HPP
