#include "nitsche/interface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nitsche {

Vec2 Interface::gradient(Point2 p, double step) const {
  if (grad_phi) return grad_phi(p);
  const double gx = (phi({p.x + step, p.y}) - phi({p.x - step, p.y})) / (2.0 * step);
  const double gy = (phi({p.x, p.y + step}) - phi({p.x, p.y - step})) / (2.0 * step);
  return {gx, gy};
}

double Interface::curvature_at(Point2 p, double step) const {
  if (curvature) return curvature(p);
  // Divergence of the unit normal from second differences of phi.
  const double s = step;
  const double f = phi(p);
  const double fxp = phi({p.x + s, p.y}), fxm = phi({p.x - s, p.y});
  const double fyp = phi({p.x, p.y + s}), fym = phi({p.x, p.y - s});
  const double fx = (fxp - fxm) / (2 * s), fy = (fyp - fym) / (2 * s);
  const double fxx = (fxp - 2 * f + fxm) / (s * s), fyy = (fyp - 2 * f + fym) / (s * s);
  const double fxy = (phi({p.x + s, p.y + s}) - phi({p.x + s, p.y - s}) - phi({p.x - s, p.y + s}) +
                      phi({p.x - s, p.y - s})) /
                     (4 * s * s);
  const double g2 = fx * fx + fy * fy;
  if (g2 == 0.0) return 0.0;
  return std::abs(fxx * fy * fy - 2 * fx * fy * fxy + fyy * fx * fx) / std::pow(g2, 1.5);
}

double Interface::lipschitz_bound(Point2 center, double radius) const {
  if (!lipschitz) return 0.0;
  const double l = lipschitz(center, radius);
  return std::isfinite(l) && l > 0.0 ? l : 0.0;
}

Interface circle_interface(Point2 center, double radius, std::string name) {
  Interface iface;
  iface.name = std::move(name);
  iface.phi = [center, radius](Point2 p) { return norm(p - center) - radius; };
  iface.grad_phi = [center](Point2 p) {
    const Vec2 d = p - center;
    const double r = norm(d);
    return r > 0.0 ? d / r : Vec2{1.0, 0.0};
  };
  iface.curvature = [radius](Point2) { return 1.0 / radius; };
  iface.lipschitz = [](Point2, double) { return 1.0; };
  return iface;
}

Interface line_interface(double a, double b, double c, std::string name) {
  const double s = std::hypot(a, b);
  if (s == 0.0) throw std::invalid_argument("line_interface: zero normal");
  a /= s;
  b /= s;
  c /= s;
  Interface iface;
  iface.name = std::move(name);
  iface.phi = [a, b, c](Point2 p) { return a * p.x + b * p.y + c; };
  iface.grad_phi = [a, b](Point2) { return Vec2{a, b}; };
  iface.curvature = [](Point2) { return 0.0; };
  iface.lipschitz = [](Point2, double) { return 1.0; };
  return iface;
}

Interface polar_interface(std::string name, PolarCurve curve) {
  auto c = std::make_shared<const PolarCurve>(std::move(curve));
  Interface iface;
  iface.name = std::move(name);
  iface.phi = [c](Point2 p) {
    const Vec2 d = p - c->center;
    return norm(d) - c->rho(std::atan2(d.y, d.x));
  };
  iface.grad_phi = [c](Point2 p) {
    const Vec2 d = p - c->center;
    const double r = norm(d);
    if (r == 0.0) return Vec2{1.0, 0.0};
    const double th = std::atan2(d.y, d.x);
    const Vec2 radial = d / r;
    return radial - (c->drho(th) / r) * perp(radial);
  };
  iface.curvature = [c](Point2 p) {
    const Vec2 d = p - c->center;
    const double th = std::atan2(d.y, d.x);
    const double r = c->rho(th), r1 = c->drho(th), r2 = c->d2rho(th);
    const double den = std::pow(r * r + r1 * r1, 1.5);
    return den > 0.0 ? std::abs(r * r + 2 * r1 * r1 - r * r2) / den : 0.0;
  };
  // |grad phi|^2 = 1 + (rho'/r)^2. Bound max |rho'| by sampling plus the
  // largest |rho''| times half the sample spacing.
  constexpr int kSamples = 8192;
  const double step = 2.0 * std::numbers::pi / kSamples;
  double d1 = 0.0, d2 = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const double th = -std::numbers::pi + k * step;
    d1 = std::max(d1, std::abs(c->drho(th)));
    d2 = std::max(d2, std::abs(c->d2rho(th)));
  }
  const double slope = d1 + d2 * step;
  iface.lipschitz = [c, slope](Point2 q, double radius) {
    const double rmin = norm(q - c->center) - radius;
    if (!(rmin > 0.0)) return std::numeric_limits<double>::infinity();
    return std::hypot(1.0, slope / rmin);
  };
  return iface;
}

// ---------------------------------------------------------------------------

PolylineLevelSet::PolylineLevelSet(const ParametricCurve& curve, int samples, int grid_cells)
    : curve_(curve) {
  if (samples < 16) throw std::invalid_argument("polyline needs at least 16 samples");
  points_.resize(samples);
  params_.resize(samples + 1);
  for (int k = 0; k <= samples; ++k) params_[k] = 2.0 * std::numbers::pi * k / samples;
  for (int k = 0; k < samples; ++k) points_[k] = curve_.position(params_[k]);
  for (int k = 0; k < samples; ++k) area2_ += cross(points_[k], points_[(k + 1) % samples]);
  if (area2_ < 0.0) {
    // Keep the inside on the left of the traversal direction.
    std::reverse(points_.begin(), points_.end());
    std::reverse(params_.begin(), params_.end());
    std::rotate(points_.begin(), points_.end() - 1, points_.end());
    area2_ = -area2_;
    orientation_ = -1.0;
  }

  cells_ = grid_cells;
  lo_ = -1.25;
  cell_size_ = 2.5 / cells_;
  cap_ = 2.0 * cell_size_;
  for (const auto& p : points_) {
    if (std::abs(p.x) > 1.25 - 2 * cap_ || std::abs(p.y) > 1.25 - 2 * cap_) {
      throw std::invalid_argument("polyline interface leaves the level-set grid");
    }
  }

  const int n = static_cast<int>(points_.size());
  const int ncell = cells_ * cells_;
  cell_ptr_.assign(ncell + 1, 0);
  auto for_cells = [&](int seg, auto&& fn) {
    const Point2 a = points_[seg], b = points_[(seg + 1) % n];
    const int i0 = cell_of(std::min(a.x, b.x) - cap_), i1 = cell_of(std::max(a.x, b.x) + cap_);
    const int j0 = cell_of(std::min(a.y, b.y) - cap_), j1 = cell_of(std::max(a.y, b.y) + cap_);
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) fn(j * cells_ + i);
    }
  };
  for (int s = 0; s < n; ++s) for_cells(s, [&](int c) { ++cell_ptr_[c + 1]; });
  for (int c = 0; c < ncell; ++c) cell_ptr_[c + 1] += cell_ptr_[c];
  cell_segments_.resize(cell_ptr_[ncell]);
  std::vector<int> fill(cell_ptr_.begin(), cell_ptr_.end() - 1);
  for (int s = 0; s < n; ++s) for_cells(s, [&](int c) { cell_segments_[fill[c]++] = s; });

  cell_sign_.assign(ncell, 1);
  for (int j = 0; j < cells_; ++j) {
    for (int i = 0; i < cells_; ++i) {
      const int c = j * cells_ + i;
      if (cell_ptr_[c + 1] > cell_ptr_[c]) continue;
      const Point2 center{lo_ + (i + 0.5) * cell_size_, lo_ + (j + 0.5) * cell_size_};
      cell_sign_[c] = winding_number(center) != 0 ? -1 : 1;
    }
  }
}

int PolylineLevelSet::cell_of(double coord) const {
  const int i = static_cast<int>(std::floor((coord - lo_) / cell_size_));
  return std::clamp(i, 0, cells_ - 1);
}

int PolylineLevelSet::winding_number(Point2 p) const {
  int wn = 0;
  const int n = static_cast<int>(points_.size());
  for (int k = 0; k < n; ++k) {
    const Point2 a = points_[k], b = points_[(k + 1) % n];
    if (a.y <= p.y) {
      if (b.y > p.y && cross(b - a, p - a) > 0.0) ++wn;
    } else if (b.y <= p.y && cross(b - a, p - a) < 0.0) {
      --wn;
    }
  }
  return wn;
}

PolylineLevelSet::Nearest PolylineLevelSet::nearest(Point2 p) const {
  Nearest out;
  const double hi = lo_ + cells_ * cell_size_;
  if (p.x < lo_ || p.y < lo_ || p.x >= hi || p.y >= hi) {
    out.distance = cap_;
    out.sign = 1.0;
    return out;
  }
  const int c = cell_of(p.y) * cells_ + cell_of(p.x);
  if (cell_ptr_[c + 1] == cell_ptr_[c]) {
    out.distance = cap_;
    out.sign = cell_sign_[c];
    return out;
  }
  const int n = static_cast<int>(points_.size());
  double best = std::numeric_limits<double>::infinity();
  int best_seg = -1;
  double best_t = 0.0;
  for (int i = cell_ptr_[c]; i < cell_ptr_[c + 1]; ++i) {
    const int s = cell_segments_[i];
    const Point2 a = points_[s], b = points_[(s + 1) % n];
    const Vec2 d = b - a;
    const double t = std::clamp(dot(p - a, d) / dot(d, d), 0.0, 1.0);
    const double dist = norm(p - (a + t * d));
    if (dist < best) {
      best = dist;
      best_seg = s;
      best_t = t;
    }
  }
  const Point2 a = points_[best_seg], b = points_[(best_seg + 1) % n];
  const Vec2 d = b - a;
  out.foot = a + best_t * d;
  out.distance = best;
  out.parameter = params_[best_seg] + best_t * (params_[best_seg + 1] - params_[best_seg]);
  auto outward = [](Vec2 dir) { return Vec2{dir.y, -dir.x}; };
  Vec2 n_out;
  if (best_t <= 0.0) {
    const Point2 prev = points_[(best_seg + n - 1) % n];
    n_out = outward((a - prev) / norm(a - prev)) + outward(d / norm(d));
  } else if (best_t >= 1.0) {
    const Point2 next = points_[(best_seg + 2) % n];
    n_out = outward(d / norm(d)) + outward((next - b) / norm(next - b));
  } else {
    n_out = outward(d);
  }
  out.sign = dot(p - out.foot, n_out) >= 0.0 ? 1.0 : -1.0;
  if (best > cap_) {
    // The nearest candidate need not be the nearest segment out here.
    out.distance = cap_;
    out.sign = winding_number(p) != 0 ? -1.0 : 1.0;
  }
  return out;
}

double PolylineLevelSet::value(Point2 p) const {
  const auto n = nearest(p);
  return n.sign * n.distance;
}

Vec2 PolylineLevelSet::gradient(Point2 p) const {
  const auto n = nearest(p);
  const Vec2 d = p - n.foot;
  const double len = norm(d);
  if (n.distance < cap_ && len > 1e-14) return (n.sign / len) * d;
  const Vec2 v = curve_.velocity(n.parameter);
  const Vec2 out{v.y, -v.x};
  return out / norm(out) * orientation_;
}

double PolylineLevelSet::curvature(Point2 p) const {
  const double t = nearest(p).parameter;
  const Vec2 v = curve_.velocity(t), a = curve_.acceleration(t);
  const double speed2 = dot(v, v);
  return speed2 > 0.0 ? std::abs(cross(v, a)) / std::pow(speed2, 1.5) : 0.0;
}

Interface polyline_interface(std::string name, const ParametricCurve& curve, int samples) {
  auto level_set = std::make_shared<const PolylineLevelSet>(curve, samples);
  Interface iface;
  iface.name = std::move(name);
  iface.phi = [level_set](Point2 p) { return level_set->value(p); };
  iface.grad_phi = [level_set](Point2 p) { return level_set->gradient(p); };
  iface.curvature = [level_set](Point2 p) { return level_set->curvature(p); };
  iface.lipschitz = [](Point2, double) { return 1.0; };
  return iface;
}

// ---------------------------------------------------------------------------

namespace {

Interface flower5() {
  PolarCurve c;
  c.center = {0.0, 0.0};
  c.rho = [](double t) { return 0.5 + std::sin(5 * t) / 7.0; };
  c.drho = [](double t) { return 5.0 * std::cos(5 * t) / 7.0; };
  c.d2rho = [](double t) { return -25.0 * std::sin(5 * t) / 7.0; };
  return polar_interface("flower5", std::move(c));
}

Interface petal6() {
  // rho = A (1 + cos 2t sin 6t) cos t; negative for |t| > pi/2, which puts
  // the whole left half-plane outside.
  constexpr double A = 0.40178;
  PolarCurve c;
  c.center = {0.0, 0.0};
  c.rho = [](double t) { return A * (1 + std::cos(2 * t) * std::sin(6 * t)) * std::cos(t); };
  c.drho = [](double t) {
    const double m = 1 + std::cos(2 * t) * std::sin(6 * t);
    const double dm = -2 * std::sin(2 * t) * std::sin(6 * t) + 6 * std::cos(2 * t) * std::cos(6 * t);
    return A * (dm * std::cos(t) - m * std::sin(t));
  };
  c.d2rho = [](double t) {
    const double s2 = std::sin(2 * t), c2 = std::cos(2 * t), s6 = std::sin(6 * t), c6 = std::cos(6 * t);
    const double m = 1 + c2 * s6;
    const double dm = -2 * s2 * s6 + 6 * c2 * c6;
    const double d2m = -4 * c2 * s6 - 12 * s2 * c6 - 12 * s2 * c6 - 36 * c2 * s6;
    return A * (d2m * std::cos(t) - 2 * dm * std::sin(t) - m * std::cos(t));
  };
  return polar_interface("petal6", std::move(c));
}

Interface sharp20() {
  PolarCurve c;
  const double shift = 0.02 * std::sqrt(5.0);
  c.center = {shift, shift};
  c.rho = [](double t) { return 0.4 + 0.2 * std::sin(20 * t); };
  c.drho = [](double t) { return 4.0 * std::cos(20 * t); };
  c.d2rho = [](double t) { return -80.0 * std::sin(20 * t); };
  return polar_interface("sharp20", std::move(c));
}

ParametricCurve spiralish_curve() {
  constexpr double r0 = 0.60125, r1 = 0.24012;
  constexpr double half_pi = std::numbers::pi / 2;
  struct State {
    double r, dr, d2r, th, dth, d2th;
  };
  auto state = [=](double t) {
    State s;
    s.r = r0 + r1 * std::cos(4 * t + half_pi);
    s.dr = -4 * r1 * std::sin(4 * t + half_pi);
    s.d2r = -16 * r1 * std::cos(4 * t + half_pi);
    s.th = t + std::sin(4 * t);
    s.dth = 1 + 4 * std::cos(4 * t);
    s.d2th = -16 * std::sin(4 * t);
    return s;
  };
  ParametricCurve c;
  c.position = [state](double t) {
    const auto s = state(t);
    return Vec2{s.r * std::cos(s.th), s.r * std::sin(s.th)};
  };
  c.velocity = [state](double t) {
    const auto s = state(t);
    const double ct = std::cos(s.th), st = std::sin(s.th);
    return Vec2{s.dr * ct - s.r * st * s.dth, s.dr * st + s.r * ct * s.dth};
  };
  c.acceleration = [state](double t) {
    const auto s = state(t);
    const double ct = std::cos(s.th), st = std::sin(s.th);
    return Vec2{s.d2r * ct - 2 * s.dr * st * s.dth - s.r * ct * s.dth * s.dth - s.r * st * s.d2th,
                s.d2r * st + 2 * s.dr * ct * s.dth - s.r * st * s.dth * s.dth + s.r * ct * s.d2th};
  };
  return c;
}

}  // namespace

Interface make_interface(std::string_view name, int polyline_samples) {
  if (name == "circle") return circle_interface({0.0, 0.0}, 0.5, "circle");
  if (name == "flower5") return flower5();
  if (name == "petal6") return petal6();
  if (name == "sharp20") return sharp20();
  if (name == "spiralish") return polyline_interface("spiralish", spiralish_curve(), polyline_samples);
  throw std::invalid_argument("unknown interface '" + std::string(name) + "'");
}

std::vector<std::string> interface_names() {
  return {"circle", "flower5", "petal6", "spiralish", "sharp20"};
}

}  // namespace nitsche
