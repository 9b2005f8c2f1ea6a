#pragma once

#include <array>
#include <span>
#include <vector>

#include "nitsche/types.hpp"

namespace nitsche {

struct QuadPoint {
  Point2 x;
  double w = 0.0;
};
using QuadRule = std::vector<QuadPoint>;

/// Supported orders: 2, 4, 6. Throws std::invalid_argument otherwise.
void check_order(int order);

/// Symmetric rule on a triangle, exact for polynomials of the given order.
/// Weights carry the signed area, so a clockwise triangle gets negative weights.
/// The `append` forms add to `out` without clearing it.
void append_triangle_rule(Point2 a, Point2 b, Point2 c, int order, QuadRule& out);
QuadRule triangle_quadrature(Point2 a, Point2 b, Point2 c, int order);

enum class FanOrigin { Centroid, FirstVertex };

/// Signed fan decomposition of a simple polygon (counterclockwise) from the
/// vertex average or from the first vertex.
void append_polygon_rule(std::span<const Point2> polygon, int order, QuadRule& out,
                         FanOrigin origin = FanOrigin::Centroid);
QuadRule polygon_quadrature(std::span<const Point2> polygon, int order,
                            FanOrigin origin = FanOrigin::Centroid);

/// Gauss-Legendre rule with ceil((order + 1) / 2) points; weights sum to the length.
QuadRule segment_quadrature(Point2 a, Point2 b, int order);

double total_weight(const QuadRule& rule);

/// Shoelace area, positive for counterclockwise polygons.
double polygon_area(std::span<const Point2> polygon);

}  // namespace nitsche
