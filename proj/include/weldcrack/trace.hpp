#pragma once

#include <array>
#include <vector>

#include "weldcrack/geometry.hpp"
#include "weldcrack/loads.hpp"

namespace weldcrack {

// ============================================================================
// Displacement trace on the outer boundary
// ============================================================================
//
// The solver's boundary output: per boundary edge of the mesh, the quadratic
// (three-node) displacement restricted to that edge.  The trace is the only
// thing the boundary indicator route consumes, so reconstruction experiments
// never touch volume data.

struct TraceEdge {
    Side side = Side::bottom;
    double lo = 0.0, hi = 0.0;   // interval in the side coordinate (y1 or y2), lo < hi
    std::array<Vec2, 3> u{};     // displacement at lo, midpoint, hi
};

// Quadratic interpolation on one edge; xi in [0, 1] runs lo -> hi.
Vec2 trace_edge_eval(const TraceEdge& e, double xi);

struct BoundaryTrace {
    std::vector<TraceEdge> edges;

    // Value at a side coordinate; throws when no edge covers it.
    Vec2 eval(Side side, double coord) const;
};

// Arclength of a boundary point measured counterclockwise from the origin
// corner: bottom edge first, then right, top (right to left), left (top to
// bottom); total perimeter 2 (a + b).
double trace_arclength(const PlateGeometry& geom, Side side, double coord);

}  // namespace weldcrack
