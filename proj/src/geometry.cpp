#include "weldcrack/geometry.hpp"

#include <cmath>

namespace weldcrack {

namespace {

// Radius at which the growing disc dropped from (x1, x2) first meets the
// point (p, c): the disc center is (x1, x2 - s), so the touch condition
// |(p,c) - (x1, x2-s)| = s gives s = ((p-x1)^2 + (x2-c)^2) / (2 (x2-c)).
double touch_radius(double x1, double x2, double c, double p) {
    const double dx = p - x1;
    const double dy = x2 - c;
    return (dx * dx + dy * dy) / (2.0 * dy);
}

}  // namespace

TangencyResult tangent_disc(double x1, const PlateGeometry& geom, const CrackConfig& cracks) {
    if (cracks.tips.empty())
        throw std::invalid_argument("tangent_disc: uncracked specimen has no tangency data");
    const double tol = classify_tol(geom);
    if (x1 < -tol || x1 > geom.a + tol)
        throw std::invalid_argument("tangent_disc: probe abscissa outside [0, a]");
    x1 = std::min(std::max(x1, 0.0), geom.a);

    const double x2 = geom.probe_y2();
    const double d = x2 - geom.c;  // vertical drop from the probe to the junction

    TangencyResult res;
    if (cracks.on_crack(x1, tol)) {
        // The disc meets the crack straight below x first.
        res.s = 0.5 * d;
        res.alpha = std::asin(1.0);  // pi/2
        const int j = cracks.tip_at(x1, tol);
        if (j >= 0) {
            // Touch point is a tip: tangency is usable for angle recovery,
            // but the contact is vertical (alpha = pi/2, parity unreadable).
            res.touching_tips.push_back(j);
            res.unique_tip = true;
        }
        return res;
    }

    // x1 lies strictly inside a welded gap ]tips[2g+1], tips[2g+2][ for some g.
    int left = -1;
    for (int g = 0; g < cracks.gap_count(); ++g) {
        if (x1 > cracks.tips[2 * g + 1] && x1 < cracks.tips[2 * g + 2]) {
            left = 2 * g + 1;
            break;
        }
    }
    if (left < 0)  // cannot happen: [0,a] is covered by cracks and gaps
        throw std::logic_error("tangent_disc: probe classified neither on a crack nor in a gap");

    const int right = left + 1;
    const double mid = 0.5 * (cracks.tips[left] + cracks.tips[right]);
    const double s_left = touch_radius(x1, x2, geom.c, cracks.tips[left]);
    const double s_right = touch_radius(x1, x2, geom.c, cracks.tips[right]);

    if (std::abs(x1 - mid) <= tol) {
        // Two-tip tie at the gap midpoint: the angle is common to both
        // contacts by symmetry, but the parity of the touching tip is not
        // defined, so the probe is unusable for the tip-recovery chain.
        res.s = 0.5 * (s_left + s_right);
        res.touching_tips = {left, right};
        res.unique_tip = false;
        res.alpha = contact_angle(x1, x2, right, res.s, geom, cracks);
        return res;
    }

    const int j = (x1 < mid) ? left : right;  // nearer tip wins
    res.s = (j == left) ? s_left : s_right;
    res.touching_tips = {j};
    res.unique_tip = true;
    res.alpha = contact_angle(x1, x2, j, res.s, geom, cracks);
    return res;
}

double contact_angle(double x1, double x2, int tip_index, double s,
                     const PlateGeometry& geom, const CrackConfig& cracks) {
    (void)geom;
    if (tip_index < 0 || tip_index >= static_cast<int>(cracks.tips.size()))
        throw std::invalid_argument("contact_angle: tip index out of range");
    if (!(s > 0.0)) throw std::invalid_argument("contact_angle: radius must be positive");

    const double sign = (tip_index % 2 == 0) ? 1.0 : -1.0;  // (-1)^j
    const double cos_a = sign * (cracks.tips[tip_index] - x1) / s;
    const double sin_a = (x2 - s - geom.c) / s;

    const double modulus = std::hypot(cos_a, sin_a);
    if (std::abs(modulus - 1.0) > 1e-9)
        throw std::invalid_argument("contact_angle: (x, tip, s) not a tangency configuration");
    if (cos_a < -1e-9)
        throw std::invalid_argument("contact_angle: contact direction points away from the probe column");

    // atan2 of the normalized pair keeps |cos+i sin| = 1 to machine precision.
    return std::atan2(sin_a / modulus, std::max(cos_a, 0.0) / modulus);
}

}  // namespace weldcrack
