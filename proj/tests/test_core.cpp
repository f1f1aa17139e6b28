#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "weldcrack/geometry.hpp"
#include "weldcrack/loads.hpp"
#include "weldcrack/material.hpp"

using namespace weldcrack;

namespace {

// Demo plate used throughout: junction at c = 1, probe line at 2.5, so discs
// dropped from the probe line fall 1.5 before reaching the junction.
PlateGeometry demo_geom() { return PlateGeometry(4.0, 2.0, 1.0, 0.5); }
CrackConfig demo_cracks(const PlateGeometry& g) {
    return CrackConfig({0.0, 1.5, 2.5, 4.0}, g);
}

// Independent tangency computation: the disc dropped from (x1, x2) first
// touches the junction point minimizing the touch radius
// ((p - x1)^2 + (x2 - c)^2) / (2 (x2 - c)) over p in the crack set.  Dense
// sampling of every crack segment plus a local refinement pass around the
// best sample; no gap/crack case analysis at all.
double brute_force_tangency(double x1, const PlateGeometry& geom, const CrackConfig& cracks) {
    const double d = geom.probe_y2() - geom.c;
    auto radius = [&](double p) {
        const double dx = p - x1;
        return (dx * dx + d * d) / (2.0 * d);
    };

    double best_s = std::numeric_limits<double>::infinity();
    double best_p = 0.0;
    for (int k = 0; k < cracks.crack_count(); ++k) {
        const double lo = cracks.tips[2 * k], hi = cracks.tips[2 * k + 1];
        const int n = 2000;
        for (int i = 0; i <= n; ++i) {
            const double p = lo + (hi - lo) * i / n;
            if (radius(p) < best_s) {
                best_s = radius(p);
                best_p = p;
            }
        }
    }
    // refine within one coarse step of the winner (clipped to the segment
    // that owns it)
    for (int k = 0; k < cracks.crack_count(); ++k) {
        const double lo = cracks.tips[2 * k], hi = cracks.tips[2 * k + 1];
        if (best_p < lo || best_p > hi) continue;
        const double step = (hi - lo) / 2000.0;
        const double flo = std::max(lo, best_p - step), fhi = std::min(hi, best_p + step);
        const int n = 4000;
        for (int i = 0; i <= n; ++i) {
            const double p = flo + (fhi - flo) * i / n;
            best_s = std::min(best_s, radius(p));
        }
    }
    return best_s;
}

}  // namespace

// ============================================================================
// Material law
// ============================================================================

TEST_CASE("kolosov constant at reference moduli") {
    CHECK(kolosov_kappa(Material(1.0, 1.0)) == doctest::Approx(2.0));
    CHECK(kolosov_kappa(Material(0.0, 1.0)) == doctest::Approx(3.0));
    CHECK(kolosov_kappa(Material(9.0, 1.0)) == doctest::Approx(1.2));
}

TEST_CASE("inadmissible moduli are rejected") {
    CHECK_THROWS_AS(Material(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Material(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(Material(-2.0, 1.0), std::invalid_argument);  // lambda + mu <= 0
    CHECK_NOTHROW(Material(-0.5, 1.0));                           // admissible negative lambda
}

// ============================================================================
// Geometry construction
// ============================================================================

TEST_CASE("plate geometry validates its box") {
    CHECK_THROWS_AS(PlateGeometry(0.0, 2.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(PlateGeometry(4.0, 2.0, 2.0, 0.5), std::invalid_argument);  // c == b
    CHECK_THROWS_AS(PlateGeometry(4.0, 2.0, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(PlateGeometry(4.0, 2.0, 1.0, 0.0), std::invalid_argument);
    const PlateGeometry g = demo_geom();
    CHECK(g.probe_y2() == doctest::Approx(2.5));
    CHECK(g.scan_radius() == doctest::Approx(0.75));
}

TEST_CASE("crack configuration validates the tip list") {
    const PlateGeometry g = demo_geom();
    CHECK_NOTHROW(CrackConfig({}, g));  // uncracked specimen
    CHECK_THROWS_AS(CrackConfig({0.0, 4.0}, g), std::invalid_argument);        // too few
    CHECK_THROWS_AS(CrackConfig({0.0, 1.0, 3.0}, g), std::invalid_argument);   // odd count
    CHECK_THROWS_AS(CrackConfig({0.0, 2.0, 1.0, 4.0}, g), std::invalid_argument);
    CHECK_THROWS_AS(CrackConfig({0.5, 1.0, 3.0, 4.0}, g), std::invalid_argument);  // misses 0
    CHECK_THROWS_AS(CrackConfig({0.0, 1.0, 3.0, 3.9}, g), std::invalid_argument);  // misses a

    const CrackConfig c = demo_cracks(g);
    CHECK(c.crack_count() == 2);
    CHECK(c.gap_count() == 1);
    CHECK(c.is_interior_tip(1));
    CHECK(c.is_interior_tip(2));
    CHECK_FALSE(c.is_interior_tip(0));
    CHECK_FALSE(c.is_interior_tip(3));
    CHECK(c.on_crack(0.7, 1e-9));
    CHECK_FALSE(c.on_crack(2.0, 1e-9));
    CHECK(c.tip_at(2.5, 1e-9) == 2);
    CHECK(c.tip_at(2.0, 1e-9) == -1);
}

// ============================================================================
// Tangent-disc geometry
// ============================================================================

TEST_CASE("probe over a crack interior touches straight below") {
    const PlateGeometry g = demo_geom();
    const CrackConfig c = demo_cracks(g);
    const TangencyResult r = tangent_disc(0.7, g, c);
    CHECK(r.s == doctest::Approx(0.75));  // (b + eps - c) / 2
    CHECK(r.touching_tips.empty());
    CHECK_FALSE(r.unique_tip);
    CHECK(r.alpha == doctest::Approx(std::asin(1.0)));
}

TEST_CASE("gap probe touches the nearer tip") {
    const PlateGeometry g = demo_geom();
    const CrackConfig c = demo_cracks(g);

    // x1 = 2.3 sits right of the gap midpoint 2.0, so the disc reaches the
    // tip at 2.5 (even index) first: s = (0.2^2 + 1.5^2) / 3.
    const TangencyResult r = tangent_disc(2.3, g, c);
    CHECK(r.s == doctest::Approx((0.04 + 2.25) / 3.0).epsilon(1e-12));
    CHECK(r.s == doctest::Approx(0.76333).epsilon(1e-4));
    REQUIRE(r.touching_tips.size() == 1);
    CHECK(r.touching_tips[0] == 2);
    CHECK(r.unique_tip);

    // Contact direction: cos = (2.5 - 2.3)/s, sin = (2.5 - s - 1)/s.
    CHECK(std::cos(r.alpha) == doctest::Approx(0.2 / r.s).epsilon(1e-12));
    CHECK(std::sin(r.alpha) == doctest::Approx((1.5 - r.s) / r.s).epsilon(1e-12));
    CHECK(r.alpha == doctest::Approx(1.3057).epsilon(1e-4));
    CHECK(std::cos(r.alpha) == doctest::Approx(0.2620).epsilon(2e-3));
    CHECK(std::sin(r.alpha) == doctest::Approx(0.9651).epsilon(2e-3));
}

TEST_CASE("mirror gap probe gives the mirror tip with the same angle") {
    const PlateGeometry g = demo_geom();
    const CrackConfig c = demo_cracks(g);
    const TangencyResult right = tangent_disc(2.3, g, c);
    const TangencyResult left = tangent_disc(1.7, g, c);
    REQUIRE(left.touching_tips.size() == 1);
    CHECK(left.touching_tips[0] == 1);  // odd index: right end of the left crack
    CHECK(left.s == doctest::Approx(right.s).epsilon(1e-14));
    CHECK(left.alpha == doctest::Approx(right.alpha).epsilon(1e-14));
}

TEST_CASE("gap midpoint is a two-tip tie") {
    const PlateGeometry g = demo_geom();
    const CrackConfig c = demo_cracks(g);
    const TangencyResult r = tangent_disc(2.0, g, c);
    REQUIRE(r.touching_tips.size() == 2);
    CHECK(r.touching_tips[0] == 1);
    CHECK(r.touching_tips[1] == 2);
    CHECK_FALSE(r.unique_tip);
}

TEST_CASE("probe exactly over a tip reports the tip with vertical contact") {
    const PlateGeometry g = demo_geom();
    const CrackConfig c = demo_cracks(g);
    const TangencyResult r = tangent_disc(1.5, g, c);
    CHECK(r.s == doctest::Approx(0.75));
    REQUIRE(r.touching_tips.size() == 1);
    CHECK(r.touching_tips[0] == 1);
    CHECK(r.unique_tip);
    CHECK(r.alpha == doctest::Approx(std::asin(1.0)));
}

TEST_CASE("out-of-range probes and uncracked configs are rejected") {
    const PlateGeometry g = demo_geom();
    CHECK_THROWS_AS(tangent_disc(2.0, g, CrackConfig({}, g)), std::invalid_argument);
    CHECK_THROWS_AS(tangent_disc(-0.5, g, demo_cracks(g)), std::invalid_argument);
    CHECK_THROWS_AS(tangent_disc(4.5, g, demo_cracks(g)), std::invalid_argument);
}

TEST_CASE("contact angle rejects inconsistent tangency inputs") {
    const PlateGeometry g = demo_geom();
    const CrackConfig c = demo_cracks(g);
    // Correct radius passes, a perturbed radius breaks the unit modulus.
    const TangencyResult r = tangent_disc(2.3, g, c);
    CHECK_NOTHROW(contact_angle(2.3, g.probe_y2(), 2, r.s, g, c));
    CHECK_THROWS_AS(contact_angle(2.3, g.probe_y2(), 2, r.s * 1.01, g, c),
                    std::invalid_argument);
    CHECK_THROWS_AS(contact_angle(2.3, g.probe_y2(), 7, r.s, g, c), std::invalid_argument);
    CHECK_THROWS_AS(contact_angle(2.3, g.probe_y2(), 2, -r.s, g, c), std::invalid_argument);
}

// ============================================================================
// Tangency against the sampling oracle
// ============================================================================

TEST_CASE("closed-form radius matches the dense-sampling oracle on random configs") {
    std::mt19937 rng(20240811u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int trial = 0; trial < 100; ++trial) {
        const double a = 2.0 + 6.0 * unit(rng);
        const double b = 1.0 + 2.0 * unit(rng);
        const double cy = b * (0.2 + 0.6 * unit(rng));
        const double eps = 0.2 + 1.0 * unit(rng);
        const PlateGeometry geom(a, b, cy, eps);

        // 2 or 3 crack segments: draw interior tips with a minimum spacing
        // so the configuration stays valid.
        const int m = 1 + static_cast<int>(unit(rng) * 2.0);  // gap count 1..2
        const int n_tips = 2 * (m + 1);
        std::vector<double> tips(n_tips);
        tips.front() = 0.0;
        tips.back() = a;
        std::vector<double> inner(n_tips - 2);
        for (double& t : inner) t = a * (0.05 + 0.9 * unit(rng));
        std::sort(inner.begin(), inner.end());
        bool spaced = true;
        for (std::size_t i = 0; i + 1 < inner.size(); ++i)
            if (inner[i + 1] - inner[i] < 0.05 * a) spaced = false;
        if (!spaced || inner.front() < 0.05 * a || a - inner.back() < 0.05 * a) {
            --trial;  // resample degenerate layouts
            continue;
        }
        std::copy(inner.begin(), inner.end(), tips.begin() + 1);
        const CrackConfig cracks(tips, geom);

        const double x1 = a * unit(rng);
        const TangencyResult r = tangent_disc(x1, geom, cracks);
        const double s_bf = brute_force_tangency(x1, geom, cracks);
        CHECK(r.s == doctest::Approx(s_bf).epsilon(1e-6));
    }
}

TEST_CASE("tangency radius dominates the vertical drop radius") {
    // s(x1) >= (x2 - c)/2 everywhere, equality exactly over the crack set.
    const PlateGeometry g = demo_geom();
    const CrackConfig c = demo_cracks(g);
    const double floor_s = 0.5 * (g.probe_y2() - g.c);
    const double tol = classify_tol(g);
    for (int i = 0; i <= 400; ++i) {
        const double x1 = g.a * i / 400.0;
        const TangencyResult r = tangent_disc(x1, g, c);
        CHECK(r.s >= floor_s - 1e-14);
        if (c.on_crack(x1, tol))
            CHECK(r.s == doctest::Approx(floor_s).epsilon(1e-14));
        else
            CHECK(r.s > floor_s + 1e-12);
    }
}

TEST_CASE("tangency radius is 1-Lipschitz in the probe abscissa") {
    // Holds when every gap is narrower than twice the drop height, which the
    // demo layout satisfies; sampled difference quotients stay below 1.
    const PlateGeometry g = demo_geom();
    const CrackConfig c = demo_cracks(g);
    const int n = 2000;
    double prev = tangent_disc(0.0, g, c).s;
    for (int i = 1; i <= n; ++i) {
        const double x1 = g.a * i / n;
        const double cur = tangent_disc(x1, g, c).s;
        CHECK(std::abs(cur - prev) <= g.a / n * (1.0 + 1e-9));
        prev = cur;
    }
}

TEST_CASE("contact angle always has unit modulus and nonnegative cosine") {
    const PlateGeometry g = demo_geom();
    const CrackConfig c = demo_cracks(g);
    for (int i = 0; i <= 200; ++i) {
        const double x1 = g.a * i / 200.0;
        const TangencyResult r = tangent_disc(x1, g, c);
        const double modulus = std::hypot(std::cos(r.alpha), std::sin(r.alpha));
        CHECK(modulus == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::cos(r.alpha) >= -1e-12);
        CHECK(r.alpha > -std::asin(1.0));
        CHECK(r.alpha <= std::asin(1.0) + 1e-15);
    }
}

// ============================================================================
// Boundary loads
// ============================================================================

TEST_CASE("tension preset is exactly equilibrated") {
    const PlateGeometry g = demo_geom();
    const BoundaryLoad load = make_tension_load(g, 1.0, 0.5);
    const CompatibilityReport rep = check_compatibility(load, g);
    CHECK(std::abs(rep.force_x) <= 1e-12 * rep.load_scale);
    CHECK(std::abs(rep.force_y) <= 1e-12 * rep.load_scale);
    CHECK(std::abs(rep.moment) <= 1e-12 * rep.load_scale);
    CHECK(rep.support_ok);
    CHECK(rep.equilibrated());
}

TEST_CASE("oblique preset is exactly equilibrated") {
    const PlateGeometry g = demo_geom();
    const BoundaryLoad load = make_oblique_load(g, 1.0, 0.2);
    const CompatibilityReport rep = check_compatibility(load, g);
    CHECK(std::abs(rep.force_x) <= 1e-12 * rep.load_scale);
    CHECK(std::abs(rep.force_y) <= 1e-12 * rep.load_scale);
    CHECK(std::abs(rep.moment) <= 1e-12 * rep.load_scale);
    CHECK(rep.support_ok);
}

TEST_CASE("single-face pull is incompatible") {
    const PlateGeometry g = demo_geom();
    BoundaryLoad load;
    load.patches.push_back({Side::top, 0.5, 3.5, Vec2{0.0, 1.0}});
    load.gamma = 0.5;
    const CompatibilityReport rep = check_compatibility(load, g);
    CHECK(std::abs(rep.force_y) > 1e-6);
    CHECK_FALSE(rep.equilibrated());
}

TEST_CASE("support clearance violations are caught") {
    const PlateGeometry g = demo_geom();
    // Tension patches run over ]gamma, a - gamma[; gamma = 0 would touch the
    // corners, and on the lateral sides any patch near x2 = c is banned.
    CHECK_THROWS_AS(make_tension_load(g, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_tension_load(g, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_tension_load(g, 0.0, 0.5), std::invalid_argument);  // zero amplitude

    BoundaryLoad bad;
    bad.gamma = 0.3;
    bad.patches.push_back({Side::top, 0.1, 3.9, Vec2{0.0, 1.0}});   // inside corner balls
    bad.patches.push_back({Side::bottom, 0.1, 3.9, Vec2{0.0, -1.0}});
    const CompatibilityReport rep = check_compatibility(bad, g);
    CHECK_FALSE(rep.support_ok);
}

TEST_CASE("piecewise evaluation returns the patch traction on its support") {
    const PlateGeometry g = demo_geom();
    const BoundaryLoad load = make_tension_load(g, 2.0, 0.5);
    CHECK(load.eval(Side::top, 2.0).y == doctest::Approx(2.0));
    CHECK(load.eval(Side::bottom, 2.0).y == doctest::Approx(-2.0));
    CHECK(load.eval(Side::top, 0.25).y == doctest::Approx(0.0));  // outside ]0.5, 3.5[
    CHECK(load.eval(Side::left, 1.8).x == doctest::Approx(0.0));
    CHECK(load.eval(Side::left, 1.8).y == doctest::Approx(0.0));
}

TEST_CASE("boundary parametrization walks the perimeter counterclockwise") {
    const PlateGeometry g = demo_geom();
    CHECK(boundary_point(g, Side::bottom, 1.0).x == doctest::Approx(1.0));
    CHECK(boundary_point(g, Side::bottom, 1.0).y == doctest::Approx(0.0));
    CHECK(boundary_point(g, Side::right, 0.5).x == doctest::Approx(4.0));
    CHECK(boundary_point(g, Side::top, 1.0).y == doctest::Approx(2.0));
    CHECK(boundary_point(g, Side::left, 0.5).x == doctest::Approx(0.0));
    CHECK(outward_normal(Side::bottom).y == doctest::Approx(-1.0));
    CHECK(outward_normal(Side::top).y == doctest::Approx(1.0));
    CHECK(outward_normal(Side::left).x == doctest::Approx(-1.0));
    CHECK(outward_normal(Side::right).x == doctest::Approx(1.0));
    CHECK(side_length(g, Side::bottom) == doctest::Approx(4.0));
    CHECK(side_length(g, Side::left) == doctest::Approx(2.0));
}
