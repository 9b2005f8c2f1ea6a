#include "nitsche/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace nitsche {
namespace {

struct BaryPoint {
  double l0, l1, l2, w;  // weights normalised to sum 1
};

std::vector<BaryPoint> make_rule(int order) {
  std::vector<BaryPoint> r;
  auto orbit3 = [&](double a, double w) {
    const double b = 1.0 - 2.0 * a;
    r.push_back({b, a, a, w});
    r.push_back({a, b, a, w});
    r.push_back({a, a, b, w});
  };
  auto orbit6 = [&](double a, double b, double w) {
    const double c = 1.0 - a - b;
    r.push_back({a, b, c, w});
    r.push_back({a, c, b, w});
    r.push_back({b, a, c, w});
    r.push_back({b, c, a, w});
    r.push_back({c, a, b, w});
    r.push_back({c, b, a, w});
  };
  switch (order) {
    case 2:
      orbit3(1.0 / 6.0, 1.0 / 3.0);
      break;
    case 4:
      orbit3(0.445948490915964886318329253883, 0.223381589678011465944562883147);
      orbit3(0.091576213509770743459571463402, 0.109951743655321867388770450186);
      break;
    case 6:
      orbit3(0.249286745170910421291638553107, 0.116786275726379366030690538687);
      orbit3(0.063089014491502228340331602870, 0.050844906370206816920936809106);
      orbit6(0.053145049844816947353249671631, 0.310352451033784405416607733956,
             0.082851075618373575193553456421);
      break;
    default:
      throw std::invalid_argument("unsupported quadrature order " + std::to_string(order));
  }
  return r;
}

const std::vector<BaryPoint>& rule_for(int order) {
  static const std::vector<BaryPoint> r2 = make_rule(2);
  static const std::vector<BaryPoint> r4 = make_rule(4);
  static const std::vector<BaryPoint> r6 = make_rule(6);
  switch (order) {
    case 2: return r2;
    case 4: return r4;
    case 6: return r6;
    default: check_order(order);
  }
  return r2;
}

}  // namespace

void check_order(int order) {
  if (order != 2 && order != 4 && order != 6) {
    throw std::invalid_argument("unsupported quadrature order " + std::to_string(order));
  }
}

void append_triangle_rule(Point2 a, Point2 b, Point2 c, int order, QuadRule& out) {
  const double area = 0.5 * cross(b - a, c - a);
  for (const auto& q : rule_for(order)) {
    out.push_back({q.l0 * a + q.l1 * b + q.l2 * c, q.w * area});
  }
}

QuadRule triangle_quadrature(Point2 a, Point2 b, Point2 c, int order) {
  QuadRule out;
  append_triangle_rule(a, b, c, order, out);
  return out;
}

void append_polygon_rule(std::span<const Point2> polygon, int order, QuadRule& out, FanOrigin origin) {
  check_order(order);
  const std::size_t n = polygon.size();
  if (n < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
  if (origin == FanOrigin::FirstVertex) {
    for (std::size_t k = 1; k + 1 < n; ++k) append_triangle_rule(polygon[0], polygon[k], polygon[k + 1], order, out);
    return;
  }
  Point2 o{0.0, 0.0};
  for (const auto& p : polygon) o += p;
  o = o / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    append_triangle_rule(o, polygon[k], polygon[(k + 1) % n], order, out);
  }
}

QuadRule polygon_quadrature(std::span<const Point2> polygon, int order, FanOrigin origin) {
  QuadRule out;
  append_polygon_rule(polygon, order, out, origin);
  return out;
}

QuadRule segment_quadrature(Point2 a, Point2 b, int order) {
  check_order(order);
  // Gauss-Legendre nodes/weights on [-1, 1].
  static const double x2[] = {-0.57735026918962576451, 0.57735026918962576451};
  static const double w2[] = {1.0, 1.0};
  static const double x3[] = {-0.77459666924148337704, 0.0, 0.77459666924148337704};
  static const double w3[] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  static const double x4[] = {-0.86113631159405257522, -0.33998104358485626480, 0.33998104358485626480,
                              0.86113631159405257522};
  static const double w4[] = {0.34785484513745385737, 0.65214515486254614263, 0.65214515486254614263,
                              0.34785484513745385737};
  const int npts = (order + 2) / 2;
  const double* x = npts == 2 ? x2 : npts == 3 ? x3 : x4;
  const double* w = npts == 2 ? w2 : npts == 3 ? w3 : w4;
  const double len = norm(b - a);
  QuadRule out;
  out.reserve(npts);
  for (int k = 0; k < npts; ++k) {
    const double s = 0.5 * (1.0 + x[k]);
    out.push_back({a + s * (b - a), 0.5 * w[k] * len});
  }
  return out;
}

double total_weight(const QuadRule& rule) {
  double s = 0.0;
  for (const auto& q : rule) s += q.w;
  return s;
}

double polygon_area(std::span<const Point2> polygon) {
  double a = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t k = 0; k < n; ++k) a += cross(polygon[k], polygon[(k + 1) % n]);
  return 0.5 * a;
}

}  // namespace nitsche
