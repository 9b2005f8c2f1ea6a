#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nitsche/types.hpp"

namespace nitsche {

/// Implicit description of the interface curve.
///
/// phi < 0 inside (subdomain One), phi > 0 outside (subdomain Two). The
/// gradient and curvature fields are optional; when absent they are
/// approximated by central differences of phi.
struct Interface {
  std::string name;
  ScalarField phi;
  VectorField grad_phi;
  /// Unsigned curvature of the interface near the query point.
  ScalarField curvature;
  /// Upper bound on |grad phi| over the disc (center, radius); may be empty
  /// or return 0 or infinity when unknown. Lets the edge scans skip edges
  /// that cannot contain a root.
  std::function<double(Point2, double)> lipschitz;

  double operator()(Point2 p) const { return phi(p); }
  /// 0 when no finite bound is known.
  double lipschitz_bound(Point2 center, double radius) const;
  Vec2 gradient(Point2 p, double step = 1e-6) const;
  double curvature_at(Point2 p, double step = 1e-6) const;
};

Interface circle_interface(Point2 center, double radius, std::string name = "circle");

/// phi = a x + b y + c, normalised so that |grad phi| = 1.
Interface line_interface(double a, double b, double c, std::string name = "line");

/// A star-shaped curve r = rho(theta) about a center; phi = |p - c| - rho(theta).
struct PolarCurve {
  Point2 center;
  std::function<double(double)> rho;
  std::function<double(double)> drho;
  std::function<double(double)> d2rho;
};
Interface polar_interface(std::string name, PolarCurve curve);

/// A closed parametric curve t in [0, 2 pi).
struct ParametricCurve {
  std::function<Vec2(double)> position;
  std::function<Vec2(double)> velocity;
  std::function<Vec2(double)> acceleration;
};

/// Signed distance to a dense polyline sampling of a parametric curve, with
/// the sign taken from the inside/outside test and the magnitude clamped to a
/// few grid cells. The zero set is the polyline.
class PolylineLevelSet {
 public:
  PolylineLevelSet(const ParametricCurve& curve, int samples, int grid_cells = 128);

  double value(Point2 p) const;
  Vec2 gradient(Point2 p) const;
  double curvature(Point2 p) const;
  /// Twice the signed enclosed area (positive: counterclockwise).
  double signed_area() const { return area2_; }
  int winding_number(Point2 p) const;
  const std::vector<Point2>& points() const { return points_; }

 private:
  struct Nearest {
    double distance = 0.0;
    double sign = 1.0;
    double parameter = 0.0;
    Point2 foot;
  };
  Nearest nearest(Point2 p) const;
  int cell_of(double coord) const;

  ParametricCurve curve_;
  std::vector<Point2> points_;
  std::vector<double> params_;
  double area2_ = 0.0;
  double orientation_ = 1.0;  // -1 when the parametrisation runs clockwise
  int cells_ = 0;
  double lo_ = -1.0;
  double cell_size_ = 0.0;
  double cap_ = 0.0;
  std::vector<int> cell_ptr_;
  std::vector<int> cell_segments_;
  std::vector<signed char> cell_sign_;
};

Interface polyline_interface(std::string name, const ParametricCurve& curve, int samples);

/// Built-in catalog: "circle", "flower5", "petal6", "spiralish", "sharp20".
/// `polyline_samples` sets the resolution of polyline-based entries.
Interface make_interface(std::string_view name, int polyline_samples = 4096);
std::vector<std::string> interface_names();

}  // namespace nitsche
