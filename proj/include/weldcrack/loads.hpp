#pragma once

#include <array>
#include <string>
#include <vector>

#include "weldcrack/geometry.hpp"

namespace weldcrack {

// ============================================================================
// Boundary tractions
// ============================================================================
//
// A load is a piecewise-constant traction density on the rectangle boundary.
// Each patch lives on one side and is parametrized by the running coordinate
// of that side (x1 on bottom/top, x2 on left/right).  A solvable load must be
// self-equilibrated -- zero net force and zero net moment -- because the
// traction problem determines the displacement only modulo rigid motions.
// The admissible presets additionally keep their support away from the four
// corner discs of radius `gamma` and away from the horizontal band
// |x2 - c| <= gamma around the junction, so the probe asymptotics see only
// crack-generated field content near the junction.

enum class Side { bottom = 0, right = 1, top = 2, left = 3 };

const char* side_name(Side s);

struct Vec2 {
    double x = 0.0, y = 0.0;
};

struct LoadPatch {
    Side side = Side::top;
    double lo = 0.0, hi = 0.0;  // running-coordinate interval on the side, lo < hi
    Vec2 traction;              // constant traction density on the patch
};

struct BoundaryLoad {
    std::vector<LoadPatch> patches;
    double gamma = 0.0;  // clearance radius the support is supposed to respect
    std::string name;    // preset tag, informational

    // Traction at the point of `side` with running coordinate `coord`
    // (sum over patches; patches never overlap in the presets).
    Vec2 eval(Side side, double coord) const;

    // L1 magnitude of the load, sum over patches of |traction| * length;
    // the natural scale for equilibrium residuals.
    double scale() const;
};

// Uniaxial tension pair: traction +beta e2 on ]gamma, a-gamma[ of the top
// edge and -beta e2 on the same interval of the bottom edge.  Net force and
// moment cancel exactly between the two faces.
BoundaryLoad make_tension_load(const PlateGeometry& geom, double beta, double gamma);

// Oblique pair on the lateral edges: traction +beta (a e1 - (2 gamma + gp) e2)
// on {a} x ]c-gamma-gp, c-gamma[ and the opposite traction on
// {0} x ]c+gamma, c+gamma+gp[, with gp = min{c - 2 gamma, b - c - 2 gamma}.
// The lever arms of the two opposing oblique tractions are built so the net
// moment vanishes along with the net force.
BoundaryLoad make_oblique_load(const PlateGeometry& geom, double beta, double gamma);

// Equilibrium and support diagnostics.  The residuals are the exact integrals
// of g . rho over the boundary for the three rigid-motion generators
// rho = e1, e2, (x2, -x1); patches are constant so segment integration is
// closed-form.  support_ok reports whether every patch stays clear of the
// four corner discs and of the junction band (up to a relative slack of
// 1e-12 so patch endpoints may sit exactly on the clearance circle).
struct CompatibilityReport {
    double force_x = 0.0;
    double force_y = 0.0;
    double moment = 0.0;
    bool support_ok = false;
    double load_scale = 0.0;

    bool equilibrated(double rel_tol = 1e-10) const {
        const double s = load_scale > 0.0 ? load_scale : 1.0;
        return std::abs(force_x) <= rel_tol * s && std::abs(force_y) <= rel_tol * s &&
               std::abs(moment) <= rel_tol * s;
    }
};

CompatibilityReport check_compatibility(const BoundaryLoad& load, const PlateGeometry& geom);

// Boundary point and outward normal for a side/coordinate pair.
Vec2 boundary_point(const PlateGeometry& geom, Side side, double coord);
Vec2 outward_normal(Side side);

// Side length along its running coordinate.
double side_length(const PlateGeometry& geom, Side side);

}  // namespace weldcrack
