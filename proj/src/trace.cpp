#include "weldcrack/trace.hpp"

#include <algorithm>
#include <stdexcept>

namespace weldcrack {

Vec2 trace_edge_eval(const TraceEdge& e, double xi) {
    // 1D quadratic shape functions on [0, 1].
    const double n0 = (1.0 - xi) * (1.0 - 2.0 * xi);
    const double n1 = 4.0 * xi * (1.0 - xi);
    const double n2 = xi * (2.0 * xi - 1.0);
    return Vec2{n0 * e.u[0].x + n1 * e.u[1].x + n2 * e.u[2].x,
                n0 * e.u[0].y + n1 * e.u[1].y + n2 * e.u[2].y};
}

Vec2 BoundaryTrace::eval(Side side, double coord) const {
    const TraceEdge* best = nullptr;
    double best_slack = -1.0;
    for (const auto& e : edges) {
        if (e.side != side) continue;
        const double slack = std::min(coord - e.lo, e.hi - coord);
        if (slack >= -1e-12 * (e.hi - e.lo) && slack > best_slack) {
            best = &e;
            best_slack = slack;
        }
    }
    if (!best) throw std::invalid_argument("boundary trace has no edge at the requested point");
    const double xi = std::clamp((coord - best->lo) / (best->hi - best->lo), 0.0, 1.0);
    return trace_edge_eval(*best, xi);
}

double trace_arclength(const PlateGeometry& geom, Side side, double coord) {
    switch (side) {
        case Side::bottom: return coord;
        case Side::right: return geom.a + coord;
        case Side::top: return geom.a + geom.b + (geom.a - coord);
        case Side::left: return 2.0 * geom.a + geom.b + (geom.b - coord);
    }
    throw std::logic_error("unknown side");
}

}  // namespace weldcrack
