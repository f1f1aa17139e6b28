#pragma once

#include <stdexcept>
#include <vector>

namespace weldcrack {

// ============================================================================
// Specimen geometry
// ============================================================================
//
// The specimen is the open rectangle ]0,a[ x ]0,b[ made of two plates welded
// along the horizontal junction line x2 = c.  Measurements are synthesized on
// the full outer boundary; probe points live on the horizontal observation
// line at height b + eps, strictly outside the closed specimen.

struct PlateGeometry {
    double a = 4.0;    // horizontal extent
    double b = 2.0;    // vertical extent
    double c = 1.0;    // junction ordinate, 0 < c < b
    double eps = 0.5;  // offset of the observation line above the top edge

    PlateGeometry() = default;
    PlateGeometry(double a_, double b_, double c_, double eps_)
        : a(a_), b(b_), c(c_), eps(eps_) {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("PlateGeometry: a and b must be positive");
        if (!(c > 0.0 && c < b))
            throw std::invalid_argument("PlateGeometry: junction must satisfy 0 < c < b");
        if (!(eps > 0.0))
            throw std::invalid_argument("PlateGeometry: eps must be positive");
    }

    // Ordinate of the observation line.
    double probe_y2() const { return b + eps; }

    // Radius of the fixed vertical tangent disc used by the scan classifier:
    // the disc dropped from a probe point that touches the junction line
    // itself has radius (b + eps - c)/2.
    double scan_radius() const { return 0.5 * (b + eps - c); }
};

// ============================================================================
// Crack configuration on the junction line
// ============================================================================
//
// The cracked part of the junction is a union of closed segments
// [t_0,t_1] u [t_2,t_3] u ... u [t_2m, t_{2m+1}] (times {c}), with t_0 = 0 and
// t_{2m+1} = a: both outermost cracks break the lateral surface.  The welded
// (bonded) part is the union of the open gaps ]t_1,t_2[, ]t_3,t_4[, ...
// Indices of the interior tips t_1 .. t_{2m} keep their position in `tips`,
// so a tip with odd index is the right end of a crack and a tip with even
// index is the left end of one.

struct CrackConfig {
    std::vector<double> tips;  // t_0 < t_1 < ... < t_{2m+1}, t_0 = 0, t_{2m+1} = a

    CrackConfig() = default;
    // An empty tip list describes the fully welded (uncracked) specimen used
    // by null tests; otherwise at least two crack segments are required.
    CrackConfig(std::vector<double> tips_, const PlateGeometry& geom) : tips(std::move(tips_)) {
        if (tips.empty()) return;
        if (tips.size() < 4 || tips.size() % 2 != 0)
            throw std::invalid_argument("CrackConfig: need an even tip count >= 4");
        for (std::size_t i = 1; i < tips.size(); ++i)
            if (!(tips[i] > tips[i - 1]))
                throw std::invalid_argument("CrackConfig: tip abscissae must increase strictly");
        if (tips.front() != 0.0 || tips.back() != geom.a)
            throw std::invalid_argument("CrackConfig: outermost cracks must reach x1 = 0 and x1 = a");
    }

    // Number of welded gaps (m >= 1).
    int gap_count() const { return static_cast<int>(tips.size()) / 2 - 1; }

    // Crack segment k covers [tips[2k], tips[2k+1]].
    int crack_count() const { return static_cast<int>(tips.size()) / 2; }

    // Interior tips are tips[1] .. tips[size-2].
    bool is_interior_tip(int j) const { return j >= 1 && j + 1 < static_cast<int>(tips.size()); }

    // True when x1 lies within `tol` of some closed crack segment.
    bool on_crack(double x1, double tol) const {
        for (int k = 0; k < crack_count(); ++k)
            if (x1 >= tips[2 * k] - tol && x1 <= tips[2 * k + 1] + tol) return true;
        return false;
    }

    // Index of the tip within `tol` of x1, or -1.
    int tip_at(double x1, double tol) const {
        for (std::size_t j = 0; j < tips.size(); ++j)
            if (std::abs(x1 - tips[j]) <= tol) return static_cast<int>(j);
        return -1;
    }
};

// ============================================================================
// Tangent-disc geometry
// ============================================================================
//
// For a probe point x above the plate, consider discs of radius s centered at
// x - s e2 (all pass through x and stay above their lowest point x2 - 2s).
// The tangency radius is the largest s for which the open disc misses the
// crack set.  Growing s, the disc first touches either the crack directly
// below x (radius (x2-c)/2) or, when x sits over a welded gap, one of the two
// gap-end tips (a strictly larger radius).

struct TangencyResult {
    double s = 0.0;                  // tangency radius
    std::vector<int> touching_tips;  // tip indices met by the closed disc (empty over a crack interior)
    double alpha = 0.0;              // contact angle in ]-pi/2, pi/2]; pi/2 for a touch straight below
    bool unique_tip = false;         // exactly one touching tip: the angle recovery of the
                                     // log-derivative formula applies at this probe
};

// Classification tolerance for "x1 sits on a crack vs in a gap" style
// predicates: absolute, proportional to the plate length.
inline double classify_tol(const PlateGeometry& geom) { return 1e-9 * geom.a; }

// Tangency data for the probe (x1, b+eps).  Throws for x1 outside [0, a].
TangencyResult tangent_disc(double x1, const PlateGeometry& geom, const CrackConfig& cracks);

// Contact angle for a disc of radius s dropped from (x1, x2) that touches tip
// j: the unit vector from the disc center to the tip is
// ((-1)^j (t_j - x1)/s, (x2 - s - c)/s) = (cos alpha, sin alpha) with
// alpha in ]-pi/2, pi/2].  Throws when the inputs are inconsistent (the
// computed vector deviates from unit modulus by more than 1e-9).
double contact_angle(double x1, double x2, int tip_index, double s,
                     const PlateGeometry& geom, const CrackConfig& cracks);

}  // namespace weldcrack
