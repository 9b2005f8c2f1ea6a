#pragma once

#include <iosfwd>

#include "nitsche/recovery.hpp"
#include "nitsche/space.hpp"

namespace nitsche {

/// Legacy-VTK unstructured grid of one side's fictitious domain with the
/// nodal solution as point data "u".
void write_solution_vtk(const PairedField& field, Side s, std::ostream& out);
/// Same grid with point data "gx" and "gy" from the recovered gradient.
void write_recovered_vtk(const RecoveredGradient& rg, Side s, std::ostream& out);

/// CSV "side,node_x,node_y,u", one row per DOF of the side.
void write_solution_csv(const PairedField& field, Side s, std::ostream& out);
/// CSV "side,node_x,node_y,gx,gy", one row per DOF of the side.
void write_recovered_csv(const RecoveredGradient& rg, Side s, std::ostream& out);

}  // namespace nitsche
