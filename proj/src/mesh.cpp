#include "nitsche/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "nitsche/errors.hpp"

namespace nitsche {
namespace {

double signed_area2(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

bool on_square_boundary(Point2 p) {
  return std::abs(p.x) == 1.0 || std::abs(p.y) == 1.0;
}

}  // namespace

Mesh::Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
           std::vector<std::uint8_t> refinement_edge)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      refinement_edge_(std::move(refinement_edge)) {
  const int nv = num_vertices();
  const int nt = num_triangles();
  if (refinement_edge_.empty()) refinement_edge_.assign(nt, 0);
  if (static_cast<int>(refinement_edge_.size()) != nt) {
    throw MeshCorruption("refinement edge list does not match triangle count");
  }

  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) throw MeshCorruption("triangle " + std::to_string(t) + " references a missing vertex");
    }
    if (!(signed_area2(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]) > 0.0)) {
      throw MeshCorruption("triangle " + std::to_string(t) + " is degenerate or clockwise");
    }
  }

  // Edges sorted by vertex pair, which fixes the global edge numbering.
  struct Half {
    std::uint64_t key;
    int tri;
    int local;
  };
  std::vector<Half> halves;
  halves.reserve(3 * static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3];
      int b = tri[(k + 2) % 3];
      if (a > b) std::swap(a, b);
      halves.push_back({(static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b), t, k});
    }
  }
  std::sort(halves.begin(), halves.end(), [](const Half& l, const Half& r) {
    return l.key != r.key ? l.key < r.key : l.tri < r.tri;
  });

  triangle_edges_.assign(nt, {-1, -1, -1});
  for (std::size_t i = 0; i < halves.size();) {
    std::size_t j = i;
    while (j < halves.size() && halves[j].key == halves[i].key) ++j;
    if (j - i > 2) throw MeshCorruption("edge shared by more than two triangles");
    Edge e;
    e.v = {static_cast<int>(halves[i].key >> 32), static_cast<int>(halves[i].key & 0xffffffffu)};
    const int id = static_cast<int>(edges_.size());
    for (std::size_t k = i; k < j; ++k) {
      e.triangles[k - i] = halves[k].tri;
      triangle_edges_[halves[k].tri][halves[k].local] = id;
    }
    edges_.push_back(e);
    i = j;
  }

  boundary_vertex_.assign(nv, 0);
  for (const auto& e : edges_) {
    if (e.is_boundary()) {
      boundary_vertex_[e.v[0]] = 1;
      boundary_vertex_[e.v[1]] = 1;
    }
  }

  vertex_tri_ptr_.assign(nv + 1, 0);
  for (const auto& tri : triangles_) {
    for (int v : tri) ++vertex_tri_ptr_[v + 1];
  }
  for (int v = 0; v < nv; ++v) vertex_tri_ptr_[v + 1] += vertex_tri_ptr_[v];
  vertex_tri_.resize(vertex_tri_ptr_[nv]);
  std::vector<int> fill(vertex_tri_ptr_.begin(), vertex_tri_ptr_.end() - 1);
  for (int t = 0; t < nt; ++t) {
    for (int v : triangles_[t]) vertex_tri_[fill[v]++] = t;
  }
}

std::array<Point2, 3> Mesh::triangle_points(int t) const {
  const auto& tri = triangles_[t];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

int Mesh::find_edge(int a, int b) const {
  for (int t : vertex_triangles(a)) {
    for (int e : triangle_edges_[t]) {
      const auto& ev = edges_[e].v;
      if ((ev[0] == a && ev[1] == b) || (ev[0] == b && ev[1] == a)) return e;
    }
  }
  return -1;
}

double Mesh::max_h() const {
  double h = 0.0;
  for (const auto& e : edges_) h = std::max(h, norm(vertices_[e.v[1]] - vertices_[e.v[0]]));
  return h;
}

Mesh uniform_mesh(int n) {
  if (n < 2) throw std::invalid_argument("uniform_mesh needs n >= 2, got " + std::to_string(n));
  std::vector<Point2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.push_back({i * (2.0 / n) - 1.0, j * (2.0 / n) - 1.0});
    }
  }
  std::vector<Triangle> triangles;
  triangles.reserve(2 * static_cast<std::size_t>(n) * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int ll = id(i, j), lr = id(i + 1, j), ur = id(i + 1, j + 1), ul = id(i, j + 1);
      triangles.push_back({lr, ur, ll});
      triangles.push_back({ul, ll, ur});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh bisect(const Mesh& mesh, std::span<const int> marked) {
  const int nt = mesh.num_triangles();
  std::vector<std::uint8_t> edge_marked(mesh.num_edges(), 0);
  std::vector<int> work;
  auto ref_edge = [&](int t) { return mesh.triangle_edges(t)[mesh.refinement_edge(t)]; };
  auto mark = [&](int e) {
    if (!edge_marked[e]) {
      edge_marked[e] = 1;
      work.push_back(e);
    }
  };
  for (int t : marked) {
    if (t < 0 || t >= nt) throw std::out_of_range("bisect: triangle index out of range");
    mark(ref_edge(t));
  }
  // Closure: a triangle with any marked edge must have its refinement edge marked.
  while (!work.empty()) {
    const int e = work.back();
    work.pop_back();
    for (int t : mesh.edges()[e].triangles) {
      if (t >= 0) mark(ref_edge(t));
    }
  }

  std::vector<Point2> vertices = mesh.vertices();
  std::vector<int> edge_mid(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!edge_marked[e]) continue;
    const auto& ev = mesh.edges()[e].v;
    edge_mid[e] = static_cast<int>(vertices.size());
    vertices.push_back(midpoint(mesh.vertex(ev[0]), mesh.vertex(ev[1])));
  }

  std::vector<Triangle> triangles;
  triangles.reserve(nt + 3 * std::count(edge_marked.begin(), edge_marked.end(), 1));
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangle(t);
    const int r = mesh.refinement_edge(t);
    // Rotate so that the refinement edge is opposite local vertex 0.
    const int v0 = tri[r], v1 = tri[(r + 1) % 3], v2 = tri[(r + 2) % 3];
    const auto& te = mesh.triangle_edges(t);
    const int e0 = te[r], e1 = te[(r + 1) % 3], e2 = te[(r + 2) % 3];
    if (edge_mid[e0] < 0) {
      triangles.push_back({v0, v1, v2});
      continue;
    }
    const int m = edge_mid[e0];
    // Children (m, v0, v1) and (m, v2, v0); their refinement edges are e2 and e1.
    if (edge_mid[e2] < 0) {
      triangles.push_back({m, v0, v1});
    } else {
      const int m2 = edge_mid[e2];
      triangles.push_back({m2, m, v0});
      triangles.push_back({m2, v1, m});
    }
    if (edge_mid[e1] < 0) {
      triangles.push_back({m, v2, v0});
    } else {
      const int m1 = edge_mid[e1];
      triangles.push_back({m1, m, v2});
      triangles.push_back({m1, v0, m});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh bisect_all(const Mesh& mesh) {
  std::vector<int> all(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) all[t] = t;
  return bisect(mesh, all);
}

Mesh red_refine(const Mesh& mesh) {
  std::vector<Point2> vertices = mesh.vertices();
  std::vector<int> edge_mid(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto& ev = mesh.edges()[e].v;
    edge_mid[e] = static_cast<int>(vertices.size());
    vertices.push_back(midpoint(mesh.vertex(ev[0]), mesh.vertex(ev[1])));
  }
  std::vector<Triangle> triangles;
  triangles.reserve(4 * static_cast<std::size_t>(mesh.num_triangles()));
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const int r = mesh.refinement_edge(t);
    const int v0 = tri[r], v1 = tri[(r + 1) % 3], v2 = tri[(r + 2) % 3];
    const auto& te = mesh.triangle_edges(t);
    const int m0 = edge_mid[te[r]], m1 = edge_mid[te[(r + 1) % 3]], m2 = edge_mid[te[(r + 2) % 3]];
    // Each child lists its own right-angle vertex first.
    triangles.push_back({v0, m2, m1});
    triangles.push_back({m2, v1, m0});
    triangles.push_back({m1, m0, v2});
    triangles.push_back({m0, m1, m2});
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

ElementGeometry element_geometry(const Mesh& mesh, int t) {
  ElementGeometry g;
  g.vertices = mesh.triangle_points(t);
  const auto& p = g.vertices;
  g.area = 0.5 * signed_area2(p[0], p[1], p[2]);
  if (!(g.area > 0.0)) throw MeshCorruption("triangle " + std::to_string(t) + " has non-positive area");
  const double a = norm(p[1] - p[0]), b = norm(p[2] - p[1]), c = norm(p[0] - p[2]);
  g.h = std::max({a, b, c});
  g.rho = 4.0 * g.area / (a + b + c);
  return g;
}

double max_shape_ratio(const Mesh& mesh) {
  double worst = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = element_geometry(mesh, t);
    worst = std::max(worst, g.h / g.rho);
  }
  return worst;
}

double min_angle_degrees(const Mesh& mesh) {
  double smallest = 180.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto p = mesh.triangle_points(t);
    for (int k = 0; k < 3; ++k) {
      const Vec2 u = p[(k + 1) % 3] - p[k], w = p[(k + 2) % 3] - p[k];
      const double angle = std::atan2(std::abs(cross(u, w)), dot(u, w)) * 180.0 / std::numbers::pi;
      smallest = std::min(smallest, angle);
    }
  }
  return smallest;
}

bool is_conforming(const Mesh& mesh) {
  for (const auto& e : mesh.edges()) {
    if (e.is_boundary() &&
        !(on_square_boundary(mesh.vertex(e.v[0])) && on_square_boundary(mesh.vertex(e.v[1])))) {
      return false;
    }
    const Point2 a = mesh.vertex(e.v[0]), b = mesh.vertex(e.v[1]);
    if (e.is_boundary() && !(a.x == b.x || a.y == b.y)) return false;
  }
  return true;
}

void write_nodes(const Mesh& mesh, std::ostream& out) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
}

void write_elements(const Mesh& mesh, std::ostream& out) {
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace nitsche
