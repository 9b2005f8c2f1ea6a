#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nitsche/types.hpp"

namespace nitsche {

/// Diameter, inscribed-circle diameter and area of one triangle.
struct ElementGeometry {
  double h = 0.0;
  double rho = 0.0;
  double area = 0.0;
  std::array<Point2, 3> vertices{};
};

using Triangle = std::array<int, 3>;

struct Edge {
  std::array<int, 2> v{};               // v[0] < v[1]
  std::array<int, 2> triangles{-1, -1};  // triangles[1] == -1 on the boundary
  bool is_boundary() const { return triangles[1] < 0; }
};

/// Conforming triangulation of the square (-1,1)^2.
///
/// Triangles are stored counterclockwise. Local edge k is the edge opposite
/// local vertex k. Each triangle carries the local index of its refinement
/// edge; meshes produced by uniform_mesh() and bisect() always use edge 0, so
/// vertex 0 is the right-angle apex.
///
/// A Mesh is immutable once constructed.
class Mesh {
 public:
  Mesh() = default;
  /// Validates orientation and conformity and builds the edge adjacency.
  /// Throws MeshCorruption for degenerate or clockwise triangles and for
  /// non-manifold edges.
  Mesh(std::vector<Point2> vertices, std::vector<Triangle> triangles,
       std::vector<std::uint8_t> refinement_edge = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }

  Point2 vertex(int v) const { return vertices_[v]; }
  const Triangle& triangle(int t) const { return triangles_[t]; }
  std::array<Point2, 3> triangle_points(int t) const;
  /// Global edge indices; entry k is the edge opposite local vertex k.
  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }
  int refinement_edge(int t) const { return refinement_edge_[t]; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  const std::vector<std::uint8_t>& boundary_vertex_flags() const { return boundary_vertex_; }

  /// Triangles incident to a vertex, ascending.
  std::span<const int> vertex_triangles(int v) const {
    return {vertex_tri_.data() + vertex_tri_ptr_[v],
            static_cast<std::size_t>(vertex_tri_ptr_[v + 1] - vertex_tri_ptr_[v])};
  }

  /// Edge index joining two vertices, or -1.
  int find_edge(int a, int b) const;

  /// Largest element diameter.
  double max_h() const;

 private:
  std::vector<Point2> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<std::uint8_t> refinement_edge_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<std::uint8_t> boundary_vertex_;
  std::vector<int> vertex_tri_ptr_;
  std::vector<int> vertex_tri_;
};

/// n x n squares on (-1,1)^2, each split along its lower-left to upper-right
/// diagonal. Throws std::invalid_argument for n < 2.
Mesh uniform_mesh(int n);

/// Newest-vertex (hypotenuse) bisection of the marked triangles followed by
/// the conforming closure. Children of a right isosceles triangle are right
/// isosceles triangles again.
Mesh bisect(const Mesh& mesh, std::span<const int> marked);

/// Bisects every triangle once.
Mesh bisect_all(const Mesh& mesh);

/// Splits every triangle into four at its edge midpoints. Unlike two rounds of
/// bisect_all this keeps the diagonal direction of the parent, so
/// red_refine(uniform_mesh(n)) equals uniform_mesh(2 n) up to numbering.
/// Children of triangle t are 4 t, ..., 4 t + 3.
Mesh red_refine(const Mesh& mesh);

/// Throws MeshCorruption for a degenerate triangle.
ElementGeometry element_geometry(const Mesh& mesh, int t);

/// Diameter over inscribed-circle diameter, maximised over the mesh.
double max_shape_ratio(const Mesh& mesh);
/// Smallest interior angle over the mesh, in degrees.
double min_angle_degrees(const Mesh& mesh);

/// True when every edge with a single incident triangle lies on the boundary
/// of the square, i.e. the mesh has no hanging nodes.
bool is_conforming(const Mesh& mesh);

/// Plain-text dump: one "x y" line per vertex, one "i j k" line per triangle.
void write_nodes(const Mesh& mesh, std::ostream& out);
void write_elements(const Mesh& mesh, std::ostream& out);

}  // namespace nitsche
