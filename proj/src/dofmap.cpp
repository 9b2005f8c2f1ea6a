#include <stdexcept>
#include <string>

#include "nitsche/space.hpp"

namespace nitsche {

DofMap::DofMap(const Mesh& mesh, const Classification& cls) : mesh_(&mesh), cls_(&cls) {
  const int nv = mesh.num_vertices();
  const int nt = mesh.num_triangles();
  for (Side s : kSides) {
    auto& nd = node_dof_[index(s)];
    nd.assign(nv, -1);
    for (int t : cls.covers[index(s)]) {
      for (int v : mesh.triangle(t)) nd[v] = 0;
    }
  }
  int next = 0;
  for (Side s : kSides) {
    auto& nd = node_dof_[index(s)];
    const int start = next;
    for (int v = 0; v < nv; ++v) {
      if (nd[v] < 0) continue;
      nd[v] = next++;
      dof_vertex_.push_back(v);
      if (mesh.is_boundary_vertex(v)) dirichlet_.push_back(nd[v]);
    }
    side_count_[index(s)] = next - start;
  }
  n_dofs_ = next;

  for (Side s : kSides) {
    auto& ed = element_dofs_[index(s)];
    ed.assign(nt, {-1, -1, -1});
    const auto& nd = node_dof_[index(s)];
    for (int t : cls.covers[index(s)]) {
      const auto& tri = mesh.triangle(t);
      ed[t] = {nd[tri[0]], nd[tri[1]], nd[tri[2]]};
    }
  }
}

DofMap build_dofmap(const Mesh& mesh, const Classification& cls) { return DofMap(mesh, cls); }

std::array<Vec2, 3> barycentric_gradients(const std::array<Point2, 3>& p) {
  const double area2 = cross(p[1] - p[0], p[2] - p[0]);
  return {perp(p[2] - p[1]) / area2, perp(p[0] - p[2]) / area2, perp(p[1] - p[0]) / area2};
}

std::array<double, 3> barycentric(const std::array<Point2, 3>& p, Point2 x) {
  const double area2 = cross(p[1] - p[0], p[2] - p[0]);
  const double l1 = cross(p[2] - p[0], x - p[0]) / -area2;
  const double l2 = cross(p[1] - p[0], x - p[0]) / area2;
  return {1.0 - l1 - l2, l1, l2};
}

PointValue PairedField::eval(int element, Side side, Point2 x) const {
  const auto dofs = dofmap->element_dofs(element, side);
  if (dofs[0] < 0) {
    throw std::invalid_argument("element " + std::to_string(element) + " has no DOFs on side " +
                                std::to_string(index(side) + 1));
  }
  const auto p = dofmap->mesh().triangle_points(element);
  const auto lam = barycentric(p, x);
  const auto grad = barycentric_gradients(p);
  PointValue out;
  for (int k = 0; k < 3; ++k) {
    const double c = coefficients[dofs[k]];
    out.value += c * lam[k];
    out.grad += c * grad[k];
  }
  return out;
}

Vec2 PairedField::gradient(int element, Side side) const {
  const auto dofs = dofmap->element_dofs(element, side);
  if (dofs[0] < 0) {
    throw std::invalid_argument("element " + std::to_string(element) + " has no DOFs on side " +
                                std::to_string(index(side) + 1));
  }
  const auto grad = barycentric_gradients(dofmap->mesh().triangle_points(element));
  Vec2 g;
  for (int k = 0; k < 3; ++k) g += coefficients[dofs[k]] * grad[k];
  return g;
}

}  // namespace nitsche
