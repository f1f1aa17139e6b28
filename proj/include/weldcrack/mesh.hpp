#pragma once

#include <array>
#include <vector>

#include "weldcrack/geometry.hpp"
#include "weldcrack/loads.hpp"

namespace weldcrack {

// ============================================================================
// Crack-conforming triangulation
// ============================================================================
//
// The mesh starts from a tensor grid whose knot lines pass through every
// structural abscissa (crack tips, load patch endpoints) and through the
// junction ordinate, so no element ever straddles a material interface or a
// traction discontinuity.  Each grid cell is cut along one diagonal into two
// right triangles, with the diagonal as the newest-vertex-bisection edge;
// local refinement toward the interior crack tips then proceeds by repeated
// conforming bisection, which keeps all descendants within a few similarity
// classes (minimum angle stays above the initial grid's own bound).
//
// Cracks are opened afterwards by duplicating the junction vertices that lie
// strictly inside a crack segment (plus the two lateral surface points where
// the outermost cracks break the boundary) and re-pointing all triangles
// below the junction to the copies.  Interior tips and welded-gap vertices
// stay single, so the displacement is continuous exactly where the weld
// holds.  Quadratic midside nodes are created after duplication, keyed by
// their vertex pair, which automatically splits the midside nodes of crack
// faces, including the edges adjacent to a tip.

struct MeshOptions {
    double h = 0.05;      // target edge length of the base grid
    int tip_grading = 4;  // bisection-grading levels toward interior tips
};

struct P2Element {
    // Vertex nodes 0,1,2 (counterclockwise) and midside nodes 3,4,5 opposite
    // in the usual order: 3 on edge 01, 4 on edge 12, 5 on edge 20.
    std::array<int, 6> n{};
};

struct BoundaryEdgeRef {
    Side side = Side::bottom;
    double lo = 0.0, hi = 0.0;    // running-coordinate interval, lo < hi
    std::array<int, 3> nodes{};   // node ids at lo, midside, hi
};

struct CrackFaceEdge {
    double x_lo = 0.0, x_hi = 0.0;
    std::array<int, 3> upper{};  // node ids at x_lo, midside, x_hi on the upper face
    std::array<int, 3> lower{};  // matching nodes on the lower face
};

struct Mesh {
    PlateGeometry geom;
    CrackConfig cracks;
    MeshOptions opt;

    std::vector<Vec2> node_xy;  // vertices first, then midside nodes
    int n_vertices = 0;
    std::vector<P2Element> elems;
    std::vector<BoundaryEdgeRef> boundary;  // sorted by side, then lo
    std::vector<CrackFaceEdge> faces;       // sorted by x_lo
    int n_duplicated = 0;    // junction vertices doubled when opening the cracks
    double min_angle_deg = 0.0;
    double min_edge_len = 0.0;

    int n_nodes() const { return static_cast<int>(node_xy.size()); }
    int dof_count() const { return 2 * n_nodes(); }
};

// Builds the triangulation.  The load is consulted only for its patch
// endpoints (they become knot lines).  Requires h to be smaller than a
// quarter of the shortest crack or gap segment so the tangency structure is
// resolved; throws otherwise.
Mesh build_mesh(const PlateGeometry& geom, const CrackConfig& cracks, const BoundaryLoad& load,
                const MeshOptions& opt);

}  // namespace weldcrack
