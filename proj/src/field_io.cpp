#include "nitsche/field_io.hpp"

#include <iomanip>
#include <limits>
#include <ostream>

namespace nitsche {
namespace {

// Points are the side's DOF vertices in DOF order; cells are the triangles covering the side.
void write_grid(const DofMap& dm, Side s, std::ostream& out, const char* title) {
  const Mesh& mesh = dm.mesh();
  const int offset = dm.side_offset(s);
  const int np = dm.n_side_dofs(s);
  const auto& covers = dm.classification().covers[index(s)];
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << np << " double\n";
  for (int k = 0; k < np; ++k) {
    const Point2 p = mesh.vertex(dm.dof_vertex(offset + k));
    out << p.x << ' ' << p.y << " 0\n";
  }
  out << "CELLS " << covers.size() << ' ' << 4 * covers.size() << '\n';
  for (int t : covers) {
    const auto d = dm.element_dofs(t, s);
    out << "3 " << d[0] - offset << ' ' << d[1] - offset << ' ' << d[2] - offset << '\n';
  }
  out << "CELL_TYPES " << covers.size() << '\n';
  for (std::size_t k = 0; k < covers.size(); ++k) out << "5\n";
  out << "POINT_DATA " << np << '\n';
}

}  // namespace

void write_solution_vtk(const PairedField& field, Side s, std::ostream& out) {
  const DofMap& dm = *field.dofmap;
  write_grid(dm, s, out, "nodal solution");
  out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
  const int offset = dm.side_offset(s);
  for (int k = 0; k < dm.n_side_dofs(s); ++k) out << field.coefficients[offset + k] << '\n';
}

void write_recovered_vtk(const RecoveredGradient& rg, Side s, std::ostream& out) {
  const DofMap& dm = *rg.dofmap;
  write_grid(dm, s, out, "recovered gradient");
  const int offset = dm.side_offset(s);
  out << "SCALARS gx double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < dm.n_side_dofs(s); ++k) out << rg.values[offset + k].x << '\n';
  out << "SCALARS gy double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < dm.n_side_dofs(s); ++k) out << rg.values[offset + k].y << '\n';
}

void write_solution_csv(const PairedField& field, Side s, std::ostream& out) {
  const DofMap& dm = *field.dofmap;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "side,node_x,node_y,u\n";
  const int offset = dm.side_offset(s);
  for (int k = 0; k < dm.n_side_dofs(s); ++k) {
    const Point2 p = dm.mesh().vertex(dm.dof_vertex(offset + k));
    out << index(s) + 1 << ',' << p.x << ',' << p.y << ',' << field.coefficients[offset + k] << '\n';
  }
}

void write_recovered_csv(const RecoveredGradient& rg, Side s, std::ostream& out) {
  const DofMap& dm = *rg.dofmap;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "side,node_x,node_y,gx,gy\n";
  const int offset = dm.side_offset(s);
  for (int k = 0; k < dm.n_side_dofs(s); ++k) {
    const Point2 p = dm.mesh().vertex(dm.dof_vertex(offset + k));
    const Vec2 g = rg.values[offset + k];
    out << index(s) + 1 << ',' << p.x << ',' << p.y << ',' << g.x << ',' << g.y << '\n';
  }
}

}  // namespace nitsche
