#include "nitsche/examples.hpp"

#include <cmath>
#include <stdexcept>

namespace nitsche {

double divergence_source(double beta, Vec2 grad_beta, Vec2 grad_u, double lap_u) {
  return -(dot(grad_beta, grad_u) + beta * lap_u);
}

namespace {

double radius(Point2 p) { return std::hypot(p.x, p.y); }

ScalarField constant(double c) {
  return [c](Point2) { return c; };
}

// b1 is the coefficient inside the circle, b2 outside.
Example circle_example(std::string name, double b1, double b2) {
  Example ex;
  ex.name = std::move(name);
  ex.title = "circle r0 = 0.5, beta inside = " + std::to_string(b1) + ", beta outside = " + std::to_string(b2);
  ex.iface = make_interface("circle");
  const double shift = (1.0 / b1 - 1.0 / b2) * 0.125;
  auto& pb = ex.problem;
  pb.beta = {constant(b1), constant(b2)};
  pb.exact_u = {[b1](Point2 p) { return std::pow(radius(p), 3) / b1; },
                [b2, shift](Point2 p) { return std::pow(radius(p), 3) / b2 + shift; }};
  pb.exact_grad = {[b1](Point2 p) { return (3.0 * radius(p) / b1) * p; },
                   [b2](Point2 p) { return (3.0 * radius(p) / b2) * p; }};
  // beta_i * lap(r^3 / beta_i) = 9 r on both sides.
  const ScalarField f = [](Point2 p) { return -9.0 * radius(p); };
  pb.source = {f, f};
  return ex;
}

Example flower_example() {
  Example ex;
  ex.name = "ex52";
  ex.title = "flower r = 1/2 + sin(5 theta)/7, beta1 = 1, beta2 = 10";
  ex.iface = make_interface("flower5");
  ex.uniform_n0 = 128;
  auto& pb = ex.problem;
  pb.beta = {constant(1.0), constant(10.0)};
  pb.exact_u = {[](Point2 p) { return std::exp(dot(p, p)); },
                [](Point2 p) {
                  const double r2 = dot(p, p);
                  return 0.1 * r2 * r2 - 0.01 * std::log(2.0 * std::sqrt(r2));
                }};
  pb.exact_grad = {[](Point2 p) { return (2.0 * std::exp(dot(p, p))) * p; },
                   [](Point2 p) {
                     const double r2 = dot(p, p);
                     return (0.4 * r2 - 0.01 / r2) * p;
                   }};
  pb.source = {[](Point2 p) {
                 const double r2 = dot(p, p);
                 return -(4.0 + 4.0 * r2) * std::exp(r2);
               },
               [](Point2 p) { return -10.0 * 1.6 * dot(p, p); }};
  return ex;
}

Example petal_example() {
  Example ex;
  ex.name = "ex53";
  ex.title = "petal interface, variable coefficients";
  ex.iface = make_interface("petal6");
  auto& pb = ex.problem;
  pb.beta = {[](Point2 p) { return (7.0 + p.y * p.y - p.x * p.x) / 7.0; },
             [](Point2 p) { return (p.x * p.y + 2.0) / 5.0; }};
  pb.exact_u = {[](Point2 p) { return std::sin(p.x + p.y) + std::cos(p.x + p.y) + 1.0; },
                [](Point2 p) { return p.x + p.y + 1.0; }};
  pb.exact_grad = {[](Point2 p) {
                     const double d = std::cos(p.x + p.y) - std::sin(p.x + p.y);
                     return Vec2{d, d};
                   },
                   [](Point2) { return Vec2{1.0, 1.0}; }};
  pb.source = {[](Point2 p) {
                 const double s = p.x + p.y;
                 const double d = std::cos(s) - std::sin(s);
                 const double lap = -2.0 * (std::sin(s) + std::cos(s));
                 const double beta = (7.0 + p.y * p.y - p.x * p.x) / 7.0;
                 return divergence_source(beta, {-2.0 * p.x / 7.0, 2.0 * p.y / 7.0}, {d, d}, lap);
               },
               [](Point2 p) {
                 const double beta = (p.x * p.y + 2.0) / 5.0;
                 return divergence_source(beta, {p.y / 5.0, p.x / 5.0}, {1.0, 1.0}, 0.0);
               }};
  ex.adaptive = true;
  return ex;
}

Example spiral_example(int samples) {
  Example ex;
  ex.name = "ex54";
  ex.title = "parametric interface theta = t + sin 4t, variable coefficients";
  ex.iface = make_interface("spiralish", samples);
  auto& pb = ex.problem;
  pb.beta = {[](Point2 p) { return 4.0 + std::sin(p.x + p.y); }, [](Point2 p) { return 10.0 + dot(p, p); }};
  pb.exact_u = {[](Point2 p) { return std::sin(p.x) * std::cos(p.y); },
                [](Point2 p) { return 1.0 - dot(p, p); }};
  pb.exact_grad = {[](Point2 p) { return Vec2{std::cos(p.x) * std::cos(p.y), -std::sin(p.x) * std::sin(p.y)}; },
                   [](Point2 p) { return -2.0 * p; }};
  pb.source = {[](Point2 p) {
                 const double c = std::cos(p.x + p.y);
                 const Vec2 gu{std::cos(p.x) * std::cos(p.y), -std::sin(p.x) * std::sin(p.y)};
                 const double lap = -2.0 * std::sin(p.x) * std::cos(p.y);
                 return divergence_source(4.0 + std::sin(p.x + p.y), {c, c}, gu, lap);
               },
               [](Point2 p) { return divergence_source(10.0 + dot(p, p), 2.0 * p, -2.0 * p, -4.0); }};
  ex.adaptive = true;
  return ex;
}

Example sharp_example() {
  Example ex;
  ex.name = "ex55";
  ex.title = "r = 0.4 + 0.2 sin(20 theta), beta1 = 1, beta2 = 10";
  ex.iface = make_interface("sharp20");
  // A coarse background leaves the bulk to the sweeps: about 5k DOFs on the
  // first level with De near 0.13.
  ex.adaptive_n0 = 8;
  ex.max_levels = 24;
  auto& pb = ex.problem;
  pb.beta = {constant(1.0), constant(10.0)};
  pb.exact_u = {[](Point2 p) { return dot(p, p); },
                [](Point2 p) {
                  const double r2 = dot(p, p);
                  return (r2 * r2 - 0.1 * std::log(2.0 * std::sqrt(r2))) / 10.0;
                }};
  pb.exact_grad = {[](Point2 p) { return 2.0 * p; },
                   [](Point2 p) {
                     const double r2 = dot(p, p);
                     return ((4.0 * r2 - 0.1 / r2) / 10.0) * p;
                   }};
  // lap r^2 = 4, lap r^4 = 16 r^2, lap log r = 0.
  pb.source = {[](Point2) { return -4.0; }, [](Point2 p) { return -16.0 * dot(p, p); }};
  ex.adaptive = true;
  return ex;
}

}  // namespace

Example make_example(std::string_view name, int polyline_samples) {
  // The table labels of these four cases name the exterior coefficient first.
  if (name == "ex51a") return circle_example("ex51a", 1.0, 10.0);
  if (name == "ex51b") return circle_example("ex51b", 1.0, 1000.0);
  if (name == "ex51c") return circle_example("ex51c", 1e5, 1.0);
  if (name == "ex51d") return circle_example("ex51d", 1.0, 1e5);
  if (name == "ex52") return flower_example();
  if (name == "ex53") return petal_example();
  if (name == "ex54") return spiral_example(polyline_samples);
  if (name == "ex55") return sharp_example();
  throw std::invalid_argument("unknown example '" + std::string(name) + "'");
}

std::vector<std::string> example_names() {
  return {"ex51a", "ex51b", "ex51c", "ex51d", "ex52", "ex53", "ex54", "ex55"};
}

}  // namespace nitsche
