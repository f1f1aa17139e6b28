#include "weldcrack/loads.hpp"

#include <cmath>
#include <stdexcept>

namespace weldcrack {

const char* side_name(Side s) {
    switch (s) {
        case Side::bottom: return "bottom";
        case Side::right: return "right";
        case Side::top: return "top";
        case Side::left: return "left";
    }
    return "?";
}

Vec2 boundary_point(const PlateGeometry& geom, Side side, double coord) {
    switch (side) {
        case Side::bottom: return {coord, 0.0};
        case Side::right: return {geom.a, coord};
        case Side::top: return {coord, geom.b};
        case Side::left: return {0.0, coord};
    }
    return {};
}

Vec2 outward_normal(Side side) {
    switch (side) {
        case Side::bottom: return {0.0, -1.0};
        case Side::right: return {1.0, 0.0};
        case Side::top: return {0.0, 1.0};
        case Side::left: return {-1.0, 0.0};
    }
    return {};
}

double side_length(const PlateGeometry& geom, Side side) {
    return (side == Side::bottom || side == Side::top) ? geom.a : geom.b;
}

Vec2 BoundaryLoad::eval(Side side, double coord) const {
    Vec2 g;
    for (const auto& p : patches) {
        if (p.side != side) continue;
        if (coord >= p.lo && coord <= p.hi) {
            g.x += p.traction.x;
            g.y += p.traction.y;
        }
    }
    return g;
}

double BoundaryLoad::scale() const {
    double s = 0.0;
    for (const auto& p : patches) s += std::hypot(p.traction.x, p.traction.y) * (p.hi - p.lo);
    return s;
}

namespace {

// Distance from the patch segment to a point, and the patch's minimum
// distance to the junction ordinate; both in closed form (patches are
// axis-aligned segments).
double patch_corner_distance(const PlateGeometry& geom, const LoadPatch& p, double cx, double cy) {
    double ax, ay, bx, by;
    if (p.side == Side::bottom || p.side == Side::top) {
        ay = by = (p.side == Side::bottom) ? 0.0 : geom.b;
        ax = p.lo;
        bx = p.hi;
        const double px = std::min(std::max(cx, ax), bx);
        return std::hypot(cx - px, cy - ay);
    }
    ax = bx = (p.side == Side::left) ? 0.0 : geom.a;
    ay = p.lo;
    by = p.hi;
    const double py = std::min(std::max(cy, ay), by);
    return std::hypot(cx - ax, cy - py);
}

double patch_band_distance(const PlateGeometry& geom, const LoadPatch& p) {
    if (p.side == Side::bottom) return geom.c;
    if (p.side == Side::top) return geom.b - geom.c;
    if (geom.c >= p.lo && geom.c <= p.hi) return 0.0;
    return std::min(std::abs(p.lo - geom.c), std::abs(p.hi - geom.c));
}

void require_clearance(const BoundaryLoad& load, const PlateGeometry& geom, const char* who) {
    const double slack = load.gamma * (1.0 - 1e-12);
    const double corners[4][2] = {
        {0.0, 0.0}, {geom.a, 0.0}, {0.0, geom.b}, {geom.a, geom.b}};
    for (const auto& p : load.patches) {
        for (const auto& corner : corners)
            if (patch_corner_distance(geom, p, corner[0], corner[1]) < slack)
                throw std::invalid_argument(std::string(who) +
                                            ": support overlaps a corner clearance disc");
        if (patch_band_distance(geom, p) < slack)
            throw std::invalid_argument(std::string(who) +
                                        ": support enters the junction clearance band");
    }
}

}  // namespace

BoundaryLoad make_tension_load(const PlateGeometry& geom, double beta, double gamma) {
    if (beta == 0.0) throw std::invalid_argument("make_tension_load: beta must be nonzero");
    if (!(gamma > 0.0) || !(gamma < 0.5 * geom.a))
        throw std::invalid_argument("make_tension_load: need 0 < gamma < a/2");
    if (!(gamma < geom.c) || !(gamma < geom.b - geom.c))
        throw std::invalid_argument("make_tension_load: gamma exceeds the junction clearance");

    BoundaryLoad load;
    load.gamma = gamma;
    load.name = "tension";
    load.patches.push_back({Side::top, gamma, geom.a - gamma, {0.0, beta}});
    load.patches.push_back({Side::bottom, gamma, geom.a - gamma, {0.0, -beta}});
    require_clearance(load, geom, "make_tension_load");
    return load;
}

BoundaryLoad make_oblique_load(const PlateGeometry& geom, double beta, double gamma) {
    if (beta == 0.0) throw std::invalid_argument("make_oblique_load: beta must be nonzero");
    if (!(gamma > 0.0)) throw std::invalid_argument("make_oblique_load: gamma must be positive");
    const double gp = std::min(geom.c - 2.0 * gamma, geom.b - geom.c - 2.0 * gamma);
    if (!(gp > 0.0))
        throw std::invalid_argument("make_oblique_load: no room between junction band and corners");

    // Opposing tractions +/- beta (a, -(2 gamma + gp)) on equal-length lateral
    // patches placed below the junction on the right edge and above it on the
    // left edge; the vertical component is sized so the moments cancel.
    const Vec2 t{beta * geom.a, -beta * (2.0 * gamma + gp)};

    BoundaryLoad load;
    load.gamma = gamma;
    load.name = "oblique";
    load.patches.push_back({Side::right, geom.c - gamma - gp, geom.c - gamma, t});
    load.patches.push_back({Side::left, geom.c + gamma, geom.c + gamma + gp, {-t.x, -t.y}});
    require_clearance(load, geom, "make_oblique_load");
    return load;
}

CompatibilityReport check_compatibility(const BoundaryLoad& load, const PlateGeometry& geom) {
    CompatibilityReport rep;
    rep.load_scale = load.scale();

    for (const auto& p : load.patches) {
        const double len = p.hi - p.lo;
        const double first_moment = 0.5 * (p.hi * p.hi - p.lo * p.lo);  // integral of the coordinate
        rep.force_x += p.traction.x * len;
        rep.force_y += p.traction.y * len;
        // moment integrand: y1 g2 - y2 g1
        switch (p.side) {
            case Side::bottom:
                rep.moment += p.traction.y * first_moment;
                break;
            case Side::top:
                rep.moment += p.traction.y * first_moment - geom.b * p.traction.x * len;
                break;
            case Side::right:
                rep.moment += geom.a * p.traction.y * len - p.traction.x * first_moment;
                break;
            case Side::left:
                rep.moment += -p.traction.x * first_moment;
                break;
        }
    }

    rep.support_ok = true;
    if (load.gamma > 0.0) {
        try {
            require_clearance(load, geom, "check_compatibility");
        } catch (const std::invalid_argument&) {
            rep.support_ok = false;
        }
    }
    return rep;
}

}  // namespace weldcrack
