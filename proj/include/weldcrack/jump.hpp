#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "weldcrack/loads.hpp"

namespace weldcrack {

// ============================================================================
// Crack-opening data on the junction line
// ============================================================================
//
// The displacement jump u+ - u- across the crack faces, described piecewise
// in the junction abscissa.  Pieces are the quadrature granularity for the
// crack-side indicator route: each carries its own evaluator, and pieces
// whose jump behaves like sqrt(distance-to-tip) declare that endpoint as a
// `sqrt_anchor` so the integrator can substitute the squared variable there
// and keep the integrand smooth.

struct JumpPiece {
    double lo = 0.0, hi = 0.0;             // y1-interval, lo < hi
    std::function<Vec2(double)> value;     // jump components at y1
    double sqrt_anchor = std::numeric_limits<double>::quiet_NaN();  // lo or hi, or NaN

    bool has_anchor() const { return std::isfinite(sqrt_anchor); }
};

struct JumpOnSigma {
    std::vector<JumpPiece> pieces;

    bool empty() const { return pieces.empty(); }

    // Pointwise superposition; keeps both piece lists (the integrator sums
    // piecewise, so overlapping pieces are fine).
    static JumpOnSigma superpose(const JumpOnSigma& a, const JumpOnSigma& b) {
        JumpOnSigma out = a;
        out.pieces.insert(out.pieces.end(), b.pieces.begin(), b.pieces.end());
        return out;
    }

    // Pointwise value: sum of every piece covering y1, exactly zero off the
    // supports (welded gaps never contribute).
    Vec2 eval(double y1) const {
        Vec2 out{0.0, 0.0};
        for (const auto& p : pieces)
            if (y1 >= p.lo && y1 <= p.hi) {
                const Vec2 v = p.value(y1);
                out.x += v.x;
                out.y += v.y;
            }
        return out;
    }
};

}  // namespace weldcrack
