#pragma once

#include <array>
#include <span>
#include <vector>

#include "nitsche/geometry.hpp"
#include "nitsche/mesh.hpp"

namespace nitsche {

/// Degrees of freedom of the doubled P1 space on the two fictitious domains.
class DofMap {
 public:
  DofMap() = default;
  DofMap(const Mesh& mesh, const Classification& cls);

  int n_dofs() const { return n_dofs_; }
  int n_side_dofs(Side s) const { return side_count_[index(s)]; }
  /// First DOF of side Two; side One occupies [0, offset).
  int side_offset(Side s) const { return s == Side::One ? 0 : side_count_[0]; }
  /// Global DOF of (side, vertex), or -1.
  int node_dof(Side s, int vertex) const { return node_dof_[index(s)][vertex]; }
  const std::vector<int>& node_dofs(Side s) const { return node_dof_[index(s)]; }
  /// Vertex carrying a DOF.
  int dof_vertex(int dof) const { return dof_vertex_[dof]; }
  Side dof_side(int dof) const { return dof < side_count_[0] ? Side::One : Side::Two; }
  const std::vector<int>& dirichlet_dofs() const { return dirichlet_; }
  /// The three DOFs of a triangle on one side; entries are -1 if the
  /// triangle does not cover that side.
  std::array<int, 3> element_dofs(int t, Side s) const { return element_dofs_[index(s)][t]; }
  bool has_side(int t, Side s) const { return element_dofs_[index(s)][t][0] >= 0; }

  const Mesh& mesh() const { return *mesh_; }
  const Classification& classification() const { return *cls_; }

 private:
  const Mesh* mesh_ = nullptr;
  const Classification* cls_ = nullptr;
  int n_dofs_ = 0;
  std::array<int, 2> side_count_{};
  std::array<std::vector<int>, 2> node_dof_;
  std::vector<int> dof_vertex_;
  std::vector<int> dirichlet_;
  std::array<std::vector<std::array<int, 3>>, 2> element_dofs_;
};

DofMap build_dofmap(const Mesh& mesh, const Classification& cls);

/// Value and gradient of a P1 function at a point of a triangle.
struct PointValue {
  double value = 0.0;
  Vec2 grad;
};

/// Gradients of the three barycentric coordinates of a triangle.
std::array<Vec2, 3> barycentric_gradients(const std::array<Point2, 3>& p);
/// Barycentric coordinates of x in the triangle.
std::array<double, 3> barycentric(const std::array<Point2, 3>& p, Point2 x);

/// Coefficient vector over a DofMap: (u_1, u_2) on the two fictitious domains.
struct PairedField {
  std::vector<double> coefficients;
  const DofMap* dofmap = nullptr;

  PairedField() = default;
  explicit PairedField(const DofMap& dm) : coefficients(dm.n_dofs(), 0.0), dofmap(&dm) {}
  PairedField(const DofMap& dm, std::vector<double> c) : coefficients(std::move(c)), dofmap(&dm) {}

  /// Throws std::invalid_argument when the element lacks DOFs on that side.
  PointValue eval(int element, Side side, Point2 x) const;
  Vec2 gradient(int element, Side side) const;
};

}  // namespace nitsche
