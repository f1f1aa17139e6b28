#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "weldcrack/geometry.hpp"
#include "weldcrack/indicator.hpp"
#include "weldcrack/loads.hpp"
#include "weldcrack/material.hpp"
#include "weldcrack/oracle.hpp"
#include "weldcrack/probe.hpp"
#include "weldcrack/trace.hpp"

using namespace weldcrack;

namespace {

PlateGeometry demo_geom() { return PlateGeometry(4.0, 2.0, 1.0, 0.5); }
CrackConfig demo_cracks(const PlateGeometry& g) {
    return CrackConfig({0.0, 1.5, 2.5, 4.0}, g);
}
const Material kMat{1.0, 1.0};

SeriesCoefficients make_series(int tip, std::vector<std::pair<double, double>> modes,
                               double eta) {
    SeriesCoefficients sc;
    sc.tip_index = tip;
    sc.modes = std::move(modes);
    sc.eta = eta;
    return sc;
}

// Quadratic boundary edge sampling `field` at the edge nodes; exact for any
// displacement that is quadratic along the edge.
template <typename FieldFn>
TraceEdge sampled_edge(Side side, double lo, double hi, const PlateGeometry& g,
                       FieldFn&& field) {
    TraceEdge e;
    e.side = side;
    e.lo = lo;
    e.hi = hi;
    const double xs[3] = {lo, 0.5 * (lo + hi), hi};
    for (int i = 0; i < 3; ++i) e.u[static_cast<size_t>(i)] = field(boundary_point(g, side, xs[i]));
    return e;
}

template <typename FieldFn>
BoundaryTrace sampled_trace(const PlateGeometry& g, FieldFn&& field) {
    BoundaryTrace tr;
    tr.edges.push_back(sampled_edge(Side::bottom, 0.0, g.a, g, field));
    tr.edges.push_back(sampled_edge(Side::right, 0.0, g.b, g, field));
    tr.edges.push_back(sampled_edge(Side::top, 0.0, g.a, g, field));
    tr.edges.push_back(sampled_edge(Side::left, 0.0, g.b, g, field));
    return tr;
}

// Largest weighted probe magnitude seen on the outer boundary: the natural
// scale for "this pairing should have come out zero".
struct BoundaryScale {
    double field = 0.0;     // |v| and |dv/dtau|
    double traction = 0.0;  // |sigma(v) nu| and its tau-derivative
};

BoundaryScale probe_boundary_scale(const PlateGeometry& g, double x1, double tau,
                                   double weight_s, const Material& mat) {
    const ProbePoint p{x1, g.probe_y2(), tau};
    const double shift = tau / (2.0 * weight_s);
    BoundaryScale out;
    for (const Side side : {Side::bottom, Side::right, Side::top, Side::left}) {
        const double len = side_length(g, side);
        const Vec2 nu = outward_normal(side);
        for (int i = 0; i <= 200; ++i) {
            const Vec2 y = boundary_point(g, side, len * i / 200.0);
            const Cx w = probe_w(y.x, y.y, p);
            out.field = std::max({out.field, std::abs(probe_scalar(w, tau, shift)),
                                  std::abs(probe_dtau_scalar(w, tau, shift))});
            out.traction =
                std::max({out.traction, std::abs(probe_traction_scalar(w, tau, mat, nu, shift)),
                          std::abs(probe_dtau_traction_scalar(w, tau, mat, nu, shift))});
        }
    }
    return out;
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

// ============================================================================
// Grids and bookkeeping
// ============================================================================

TEST_CASE("geometric tau grid") {
    const auto g = geometric_tau_grid(60.0, 4, 1.5);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == doctest::Approx(60.0));
    CHECK(g[1] == doctest::Approx(90.0));
    CHECK(g[3] == doctest::Approx(202.5));
    CHECK_THROWS_AS(geometric_tau_grid(0.0, 4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(geometric_tau_grid(60.0, 0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(geometric_tau_grid(60.0, 4, 1.0), std::invalid_argument);
}

TEST_CASE("input validation on the sampling entry points") {
    const auto g = demo_geom();
    const auto cr = demo_cracks(g);
    const auto jump = make_windowed_jump(make_series(2, {{0.0, 1.0}}, 0.45), g, cr, kMat);
    CHECK_THROWS_AS(jump_indicator_sample(jump, 2.3, 0.0, 0.75, g, kMat),
                    std::invalid_argument);
    CHECK_THROWS_AS(jump_indicator_sample(jump, 2.3, 50.0, 0.0, g, kMat),
                    std::invalid_argument);
    CHECK_THROWS_AS(indicator_from_jump(jump, 2.3, {}, 0.75, g, kMat), std::invalid_argument);
    CHECK_THROWS_AS(indicator_from_jump(jump, 2.3, {50.0, 40.0}, 0.75, g, kMat),
                    std::invalid_argument);
    CHECK_THROWS_AS(indicator_from_jump(jump, 2.3, {-1.0, 40.0}, 0.75, g, kMat),
                    std::invalid_argument);
}

TEST_CASE("a specimen with no opening produces a dead curve, not a fake one") {
    const auto g = demo_geom();
    const JumpOnSigma nothing;
    const auto s = jump_indicator_sample(nothing, 2.0, 50.0, 0.75, g, kMat);
    CHECK(s.I == Cx{});
    CHECK(s.Iprime == Cx{});

    const auto curve = indicator_from_jump(nothing, 2.0, geometric_tau_grid(50.0, 8, 1.2),
                                           0.75, g, kMat);
    CHECK_FALSE(curve.usable);
    for (const auto& smp : curve.samples) CHECK(std::isinf(smp.err));
}

TEST_CASE("indicator is additive over crack openings") {
    const auto g = demo_geom();
    const auto cr = demo_cracks(g);
    const auto sc1 = make_series(1, {{0.4, 1.0}}, 0.45);
    const auto sc2 = make_series(2, {{-0.3, 0.7}}, 0.45);
    const auto j1 = make_windowed_jump(sc1, g, cr, kMat);
    const auto j2 = make_windowed_jump(sc2, g, cr, kMat);
    const auto both = make_windowed_jumps({sc1, sc2}, g, cr, kMat);

    const double tau = 50.0, w = 0.75;
    for (const double x1 : {1.8, 2.0, 2.3}) {
        const auto a = jump_indicator_sample(j1, x1, tau, w, g, kMat);
        const auto b = jump_indicator_sample(j2, x1, tau, w, g, kMat);
        const auto c = jump_indicator_sample(both, x1, tau, w, g, kMat);
        CHECK(std::abs(c.I - (a.I + b.I)) <= 1e-13 * std::abs(c.I));
        CHECK(std::abs(c.Iprime - (a.Iprime + b.Iprime)) <= 1e-13 * std::abs(c.Iprime));
    }
}

// ============================================================================
// Tail behaviour against the semi-analytic amplitudes
// ============================================================================

TEST_CASE("single-mode tail matches the predicted amplitude, phase and power") {
    const auto g = demo_geom();
    const auto cr = demo_cracks(g);
    const auto sc = make_series(2, {{0.4, 1.0}}, 0.45);
    const auto jump = make_windowed_jump(sc, g, cr, kMat);

    const double x1 = 2.3;
    const auto td = tangent_disc(x1, g, cr);
    REQUIRE(td.unique_tip);
    REQUIRE(td.touching_tips == std::vector<int>{2});

    const AlphaKernelParams prm(td.s, td.alpha, false, 0.1);
    const Cx c1 = tip_coefficient(1, prm, sc, kMat);
    const double theta = tip_phase_rate(prm);

    const double tau = 400.0;
    const auto smp = jump_indicator_sample(jump, x1, tau, td.s, g, kMat);
    const Cx want = c1 * std::exp(Cx{0.0, theta * tau}) / std::sqrt(tau);
    CHECK(std::abs(smp.I - want) <= 0.03 * std::abs(want));
}

TEST_CASE("after removing the leading mode the tail falls at the next half power") {
    const auto g = demo_geom();
    const auto cr = demo_cracks(g);
    const auto sc = make_series(2, {{0.4, 1.0}, {-0.6, 0.8}}, 0.45);
    const auto jump = make_windowed_jump(sc, g, cr, kMat);

    const double x1 = 2.3;
    const auto td = tangent_disc(x1, g, cr);
    const AlphaKernelParams prm(td.s, td.alpha, false, 0.1);
    const Cx c1 = tip_coefficient(1, prm, sc, kMat);
    const double theta = tip_phase_rate(prm);

    std::vector<double> lt, lr;
    for (double tau = 200.0; tau <= 801.0; tau *= std::sqrt(2.0)) {
        const auto smp = jump_indicator_sample(jump, x1, tau, td.s, g, kMat);
        const Cx lead = c1 * std::exp(Cx{0.0, theta * tau}) / std::sqrt(tau);
        lt.push_back(std::log(tau));
        lr.push_back(std::log(std::abs(smp.I - lead)));
    }
    CHECK(lsq_slope(lt, lr) == doctest::Approx(-1.5).epsilon(0.07));
}

TEST_CASE("opening supported away from the tangency point decays exponentially") {
    const auto g = demo_geom();
    const auto cr = demo_cracks(g);
    const auto sc = make_series(2, {{0.4, 1.0}}, 0.45);
    // keep only the outer half of the window: no contact with the tangent disc
    const auto far = make_windowed_jump(sc, g, cr, kMat, 0.5 * sc.eta);

    const double x1 = 2.3;
    const auto td = tangent_disc(x1, g, cr);

    std::vector<double> taus = {100.0, 200.0, 300.0, 400.0}, lv;
    double prev = std::numeric_limits<double>::infinity();
    for (const double tau : taus) {
        const auto smp = jump_indicator_sample(far, x1, tau, td.s, g, kMat);
        const double mag = std::abs(smp.I);
        CHECK(mag < prev);
        prev = mag;
        lv.push_back(std::log(mag));
    }

    // the slowest admissible decay comes from the inner edge of the support
    const double d = g.probe_y2() - g.c;
    const double y_in = cr.tips[2] + 0.5 * sc.eta;
    const double s_in = ((y_in - x1) * (y_in - x1) + d * d) / (2.0 * d);
    const double delta = 0.5 / td.s - 0.5 / s_in;
    REQUIRE(delta > 0.0);
    const double slope = lsq_slope(taus, lv);
    CHECK(slope < -0.5 * delta);
    CHECK(slope > -2.0 * delta);
}

// ============================================================================
// Weight handling
// ============================================================================

TEST_CASE("re-weighting is exact, invertible and ratio-preserving") {
    const auto g = demo_geom();
    const auto cr = demo_cracks(g);
    const auto jump = make_windowed_jump(make_series(2, {{0.4, 1.0}}, 0.45), g, cr, kMat);
    const auto curve =
        indicator_from_jump(jump, 2.3, geometric_tau_grid(40.0, 10, 1.25), 0.75, g, kMat);
    REQUIRE(curve.usable);

    const auto other = reweight_curve(curve, 1.5);
    CHECK(other.weight_s == 1.5);
    const auto back = reweight_curve(other, 0.75);
    for (size_t i = 0; i < curve.samples.size(); ++i) {
        const auto& a = curve.samples[i];
        const auto& b = back.samples[i];
        const auto& o = other.samples[i];
        CHECK(std::abs(b.I - a.I) <= 1e-12 * std::abs(a.I));
        CHECK(std::abs(b.Iprime - a.Iprime) <= 1e-12 * std::abs(a.Iprime));
        // the ratio used downstream never feels the weight at all
        CHECK(std::abs(o.Iprime / o.I - a.Iprime / a.I) <= 1e-13 * std::abs(a.Iprime / a.I));
        // and the scaling factor is the predicted exponential
        const double f = std::exp(a.tau * (0.5 / 0.75 - 0.5 / 1.5));
        CHECK(std::abs(o.I - f * a.I) <= 1e-12 * std::abs(o.I));
    }

    // re-weighting a curve equals building it at the target weight
    const auto direct =
        indicator_from_jump(jump, 2.3, geometric_tau_grid(40.0, 10, 1.25), 1.5, g, kMat);
    for (size_t i = 0; i < direct.samples.size(); ++i)
        CHECK(std::abs(direct.samples[i].I - other.samples[i].I) <=
              1e-9 * std::abs(direct.samples[i].I));

    CHECK_THROWS_AS(reweight_curve(curve, 0.0), std::invalid_argument);
}

TEST_CASE("derivative sample is consistent with the weighted curve in tau") {
    // The stored pair is (e^{-tau/(2s_w)} I, e^{-tau/(2s_w)} I'), so along the
    // curve d/dtau of the first equals the second minus I/(2 s_w).
    const auto g = demo_geom();
    const auto cr = demo_cracks(g);
    const auto jump = make_windowed_jump(make_series(2, {{0.4, 1.0}}, 0.45), g, cr, kMat);
    const double x1 = 2.3, sw = 0.75, tau = 100.0, h = 0.05;

    const auto at = [&](double t) { return jump_indicator_sample(jump, x1, t, sw, g, kMat); };
    const auto m2 = at(tau - 2.0 * h), m1 = at(tau - h), p1 = at(tau + h), p2 = at(tau + 2.0 * h);
    const Cx fd = (m2.I - 8.0 * m1.I + 8.0 * p1.I - p2.I) / (12.0 * h);

    const auto mid = at(tau);
    const Cx want = mid.Iprime - mid.I / (2.0 * sw);
    const double scale = std::max(std::abs(mid.Iprime), std::abs(mid.I) / (2.0 * sw));
    CHECK(std::abs(fd - want) <= 1e-6 * scale);
}

TEST_CASE("numeric range exhaustion flags the curve instead of poisoning it") {
    const auto g = demo_geom();
    const auto cr = demo_cracks(g);
    const auto jump = make_windowed_jump(make_series(2, {{0.4, 1.0}}, 0.45), g, cr, kMat);

    // weight so large the stored samples revert to the raw exploding indicator
    const auto blown =
        indicator_from_jump(jump, 2.3, {1200.0, 1600.0, 2000.0}, 1e9, g, kMat);
    CHECK_FALSE(blown.usable);
    for (const auto& s : blown.samples) CHECK(std::isinf(s.err));

    // weight so small everything underflows to an exact zero
    const auto dead = indicator_from_jump(jump, 2.3, {400.0, 600.0, 800.0}, 0.05, g, kMat);
    CHECK_FALSE(dead.usable);
}

// ============================================================================
// Boundary route
// ============================================================================

TEST_CASE("boundary route ignores rigid motions in the displacement data") {
    const PlateGeometry g(4.0, 2.0, 1.0, 2.0);
    const auto load = make_tension_load(g, 1.0, 0.5);
    const double x1 = 2.0, tau = 30.0, sw = 0.5 * (g.probe_y2() - g.c);

    const auto zero = sampled_trace(g, [](Vec2) { return Vec2{0.0, 0.0}; });
    const Vec2 shift{0.3, -0.2};
    const double rot = 0.15;
    const auto rigid = sampled_trace(g, [&](Vec2 y) {
        return Vec2{shift.x - rot * y.y, shift.y + rot * y.x};
    });

    const auto a = trace_indicator_sample(zero, load, x1, tau, sw, g, kMat);
    const auto b = trace_indicator_sample(rigid, load, x1, tau, sw, g, kMat);

    const auto sc = probe_boundary_scale(g, x1, tau, sw, kMat);
    double umax = 0.0;
    for (const auto& e : rigid.edges)
        for (const auto& u : e.u) umax = std::max({umax, std::abs(u.x), std::abs(u.y)});
    const double perim = 2.0 * (g.a + g.b);
    const double tol = 1e-9 * sc.traction * umax * perim;

    CHECK(std::abs(b.I - a.I) <= tol);
    CHECK(std::abs(b.Iprime - a.Iprime) <= tol);
}

TEST_CASE("boundary route annihilates an exact uncracked equilibrium state") {
    const PlateGeometry g(4.0, 2.0, 1.0, 0.7);
    const Material mat{2.0, 1.5};
    const double sig0 = 0.8;

    // uniform uniaxial tension: linear displacement, stress diag(0, sig0)
    const double e22 = sig0 * (mat.lambda + 2.0 * mat.mu) / (4.0 * mat.mu * (mat.lambda + mat.mu));
    const double e11 = -mat.lambda / (mat.lambda + 2.0 * mat.mu) * e22;
    REQUIRE(mat.lambda * (e11 + e22) + 2.0 * mat.mu * e22 == doctest::Approx(sig0).epsilon(1e-14));
    REQUIRE(mat.lambda * (e11 + e22) + 2.0 * mat.mu * e11 == doctest::Approx(0.0).epsilon(1e-14));

    BoundaryLoad load;
    load.name = "uniaxial";
    load.gamma = 0.5;
    load.patches.push_back({Side::top, 0.0, g.a, Vec2{0.0, sig0}});
    load.patches.push_back({Side::bottom, 0.0, g.a, Vec2{0.0, -sig0}});

    const auto trace = sampled_trace(g, [&](Vec2 y) {
        return Vec2{e11 * (y.x - 0.5 * g.a), e22 * (y.y - 0.5 * g.b)};
    });

    const double x1 = 1.7, sw = 0.5 * (g.probe_y2() - g.c);
    for (const double tau : {5.0, 15.0, 30.0}) {
        const auto s = trace_indicator_sample(trace, load, x1, tau, sw, g, mat);
        const auto bs = probe_boundary_scale(g, x1, tau, sw, mat);
        double umax = 0.0;
        for (const auto& e : trace.edges)
            for (const auto& u : e.u) umax = std::max({umax, std::abs(u.x), std::abs(u.y)});
        const double scale =
            (bs.field * sig0 + bs.traction * umax) * 2.0 * (g.a + g.b);
        CHECK(std::abs(s.I) <= 1e-9 * scale);
        CHECK(std::abs(s.Iprime) <= 1e-9 * scale);
    }
}

TEST_CASE("scaling the experiment leaves the logarithmic derivative untouched") {
    const PlateGeometry g(4.0, 2.0, 1.0, 2.0);
    const Material mat{1.0, 1.0};
    const auto load1 = make_tension_load(g, 1.0, 0.5);
    BoundaryLoad load10 = load1;
    for (auto& p : load10.patches) p.traction = Vec2{10.0 * p.traction.x, 10.0 * p.traction.y};

    // any trace data scales with the load in a linear experiment
    const auto tr1 = sampled_trace(g, [&](Vec2 y) {
        return Vec2{0.02 * y.x * y.y, -0.03 * y.x + 0.01 * y.y * y.y};
    });
    auto tr10 = tr1;
    for (auto& e : tr10.edges)
        for (auto& u : e.u) u = Vec2{10.0 * u.x, 10.0 * u.y};

    const double x1 = 2.0, tau = 25.0, sw = 1.5;
    const auto a = trace_indicator_sample(tr1, load1, x1, tau, sw, g, mat);
    const auto b = trace_indicator_sample(tr10, load10, x1, tau, sw, g, mat);
    CHECK(std::abs(b.I - 10.0 * a.I) <= 1e-12 * std::abs(b.I));
    CHECK(std::abs(b.Iprime / b.I - a.Iprime / a.I) <= 1e-12 * std::abs(a.Iprime / a.I));
}
