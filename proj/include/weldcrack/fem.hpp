#pragma once

#include <vector>

#include "weldcrack/jump.hpp"
#include "weldcrack/loads.hpp"
#include "weldcrack/material.hpp"
#include "weldcrack/mesh.hpp"
#include "weldcrack/trace.hpp"

namespace weldcrack {

// ============================================================================
// Quadratic-element elastostatic solver on the crack-conforming mesh
// ============================================================================
//
// Pure traction problem: the stated surface loads drive the specimen, no part
// of the boundary is clamped.  The stiffness matrix therefore carries the
// three rigid-body modes in its kernel; they are removed by bordering the
// system with three integral constraints (zero mean displacement in each
// component and zero mean rotation), which pins the gauge without touching
// the stress field.  The bordered matrix is factored with a sparse LU.
//
// The load must balance force and torque, otherwise the continuous problem
// has no solution at all; assemble_and_solve refuses such data up front.

struct FemSolution {
    std::vector<Vec2> node_u;  // displacement at every node, mesh ordering
    BoundaryTrace trace;       // the same displacement restricted to the boundary
    double energy = 0.0;       // internal elastic energy form evaluated at u
    double work = 0.0;         // external load functional evaluated at u
};

// Assembles and solves the traction problem on `mesh`.  Throws
// std::invalid_argument when the load violates force or torque equilibrium
// (nothing else is checked here; where the load acts is the factories'
// business).
FemSolution assemble_and_solve(const Mesh& mesh, const BoundaryLoad& load, const Material& mat);

// Displacement jump across the crack faces, upper minus lower, read off the
// solved mesh.  One piece per crack-face edge pair; pieces ending at an
// interior tip declare that endpoint as their square-root anchor.
JumpOnSigma fem_jump(const Mesh& mesh, const FemSolution& sol);

// Work of the surface load against a boundary trace (the loading functional
// applied to an arbitrary displacement restriction, not just the solution's).
double boundary_work(const BoundaryTrace& trace, const BoundaryLoad& load,
                     const PlateGeometry& geom);

}  // namespace weldcrack
