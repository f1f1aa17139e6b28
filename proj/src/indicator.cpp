#include "weldcrack/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "weldcrack/probe.hpp"
#include "weldcrack/quadrature.hpp"

namespace weldcrack {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEps = std::numeric_limits<double>::epsilon();
const Vec2 kUp{0.0, 1.0};

bool cx_finite(Cx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void validate_taus(const std::vector<double>& taus) {
    if (taus.empty()) throw std::invalid_argument("tau grid is empty");
    double prev = 0.0;
    for (double t : taus) {
        if (!(std::isfinite(t) && t > prev))
            throw std::invalid_argument("tau grid must be positive and strictly increasing");
        prev = t;
    }
}

// ----------------------------------------------------------------------------
// Crack-opening route
// ----------------------------------------------------------------------------

// Local oscillation wavelength of exp(-i tau / w) along the junction.
double osc_wavelength(double y1, double x1, double iy, double tau) {
    const double n = (y1 - x1) * (y1 - x1) + iy * iy;
    return 2.0 * kPi * n / tau;
}

// Integrates kern(w(y1)) * (j1 + i j2) over one jump piece.  Pieces anchored
// at a tip are integrated in t = sqrt(distance-to-anchor), which removes the
// square-root kink of the opening; panel seeds follow the local oscillation
// wavelength so the adaptive splitter starts resolved.
template <typename KernelFn>
QuadResult<Cx> integrate_piece(const JumpPiece& piece, double x1, double iy, double tau,
                               KernelFn&& kern) {
    const auto f_y = [&](double y1) -> Cx {
        const Cx w{y1 - x1, iy};
        const Vec2 j = piece.value(y1);
        return -kern(w) * Cx{j.x, j.y};
    };

    const double len = piece.hi - piece.lo;
    const bool anchored = piece.has_anchor();
    const bool at_hi = anchored && std::abs(piece.sqrt_anchor - piece.hi) <
                                       std::abs(piece.sqrt_anchor - piece.lo);

    std::function<Cx(double)> f;
    double a = 0.0, b = 0.0;
    std::vector<double> seeds;
    const int max_seeds = 20000;

    if (anchored) {
        const double anchor = at_hi ? piece.hi : piece.lo;
        const double dir = at_hi ? -1.0 : 1.0;
        f = [f_y, anchor, dir](double t) { return f_y(anchor + dir * t * t) * (2.0 * t); };
        a = 0.0;
        b = std::sqrt(len);
        double r = 0.0;
        while (static_cast<int>(seeds.size()) < max_seeds) {
            r += osc_wavelength(anchor + dir * r, x1, iy, tau) / 3.0;
            if (r >= len) break;
            seeds.push_back(std::sqrt(r));
        }
    } else {
        f = f_y;
        a = piece.lo;
        b = piece.hi;
        const double y0 = std::clamp(x1, piece.lo, piece.hi);
        for (double dirn : {1.0, -1.0}) {
            double y = y0;
            while (static_cast<int>(seeds.size()) < max_seeds) {
                y += dirn * osc_wavelength(y, x1, iy, tau) / 3.0;
                if (y <= piece.lo || y >= piece.hi) break;
                seeds.push_back(y);
            }
        }
        std::sort(seeds.begin(), seeds.end());
    }

    // Roundoff floor: below scale * length * eps the digits are gone anyway,
    // so stop there and let the error estimate say so.
    double scale = std::max(std::abs(f(a)), std::abs(f(b)));
    const int probes = 24;
    for (int i = 1; i < probes; ++i)
        scale = std::max(scale, std::abs(f(a + (b - a) * i / probes)));
    for (size_t i = 0; i < seeds.size(); i += std::max<size_t>(1, seeds.size() / 16))
        scale = std::max(scale, std::abs(f(seeds[i])));
    const double abs_tol = scale * (b - a) * kEps;

    return quad_gk15(f, a, b, abs_tol, 1e-11, 4000, &seeds);
}

// ----------------------------------------------------------------------------
// Boundary route
// ----------------------------------------------------------------------------

// 5-point Gauss-Legendre on [0, 1].
constexpr double kG5x[5] = {0.046910077030668004, 0.230765344947158450, 0.5,
                            0.769234655052841550, 0.953089922969331996};
constexpr double kG5w[5] = {0.118463442528094544, 0.239314335249683234, 0.284444444444444444,
                            0.239314335249683234, 0.118463442528094544};

struct EdgePanel {
    Cx val{};
    double scale = 0.0;
};

template <typename F>
EdgePanel g5_panel(F&& f, double lo, double hi) {
    EdgePanel p;
    for (int i = 0; i < 5; ++i) {
        const Cx v = f(lo + kG5x[i] * (hi - lo));
        p.val += kG5w[i] * v;
        p.scale = std::max(p.scale, std::abs(v));
    }
    p.val *= (hi - lo);
    return p;
}

// Recursive bisection around the 5-point rule; `force` levels are split
// unconditionally (used for edges sitting under the probe).
template <typename F>
void adaptive_g5(F&& f, double lo, double hi, const EdgePanel& whole, double tol, int force,
                 int depth, Cx& out, double& err, double& scale) {
    const double mid = 0.5 * (lo + hi);
    const EdgePanel l = g5_panel(f, lo, mid);
    const EdgePanel r = g5_panel(f, mid, hi);
    const Cx two = l.val + r.val;
    const double d = std::abs(two - whole.val);
    scale = std::max({scale, whole.scale, l.scale, r.scale});
    // Panel-local roundoff floor: once the split disagreement is at the
    // rounding level of the panel's own values, further splitting only
    // doubles panels (tolerance and attainable error shrink in lockstep,
    // so peaked integrands would otherwise recurse to the depth cap).
    const double attainable =
        8.0 * kEps * std::max({whole.scale, l.scale, r.scale}) * (hi - lo);
    if ((d <= std::max(tol, attainable) && force <= 0) || depth >= 40) {
        out += two;
        err += d;
        return;
    }
    adaptive_g5(f, lo, mid, l, 0.5 * tol, force - 1, depth + 1, out, err, scale);
    adaptive_g5(f, mid, hi, r, 0.5 * tol, force - 1, depth + 1, out, err, scale);
}

struct EdgeQuad {
    Cx val{};
    double err = 0.0;
};

template <typename F>
EdgeQuad integrate_edge(F&& f, double lo, double hi, int force) {
    const EdgePanel whole = g5_panel(f, lo, hi);
    const double tol0 =
        std::max(1e-13 * std::abs(whole.val), whole.scale * (hi - lo) * kEps);
    EdgeQuad q;
    double scale = 0.0;
    adaptive_g5(f, lo, hi, whole, tol0, force, 0, q.val, q.err, scale);
    q.err = std::max(q.err, scale * (hi - lo) * kEps);
    return q;
}

}  // namespace

bool IndicatorSample::finite() const {
    return cx_finite(I) && cx_finite(Iprime) && std::isfinite(err);
}

IndicatorSample jump_indicator_sample(const JumpOnSigma& jump, double x1, double tau,
                                      double weight_s, const PlateGeometry& geom,
                                      const Material& mat) {
    if (!(tau > 0.0)) throw std::invalid_argument("indicator needs tau > 0");
    if (!(weight_s > 0.0)) throw std::invalid_argument("weight radius must be positive");
    const double x2 = geom.probe_y2();
    const double iy = geom.c - x2;   // Im(w) on the junction, constant
    const double shift = tau / (2.0 * weight_s);

    const auto kern_i = [&](Cx w) { return probe_traction_scalar(w, tau, mat, kUp, shift); };
    const auto kern_p = [&](Cx w) { return probe_dtau_traction_scalar(w, tau, mat, kUp, shift); };

    IndicatorSample s;
    s.tau = tau;
    double cancel = 0.0;
    for (const auto& piece : jump.pieces) {
        const auto qi = integrate_piece(piece, x1, iy, tau, kern_i);
        const auto qp = integrate_piece(piece, x1, iy, tau, kern_p);
        s.I += qi.value;
        s.Iprime += qp.value;
        s.err += qi.error;
        cancel += std::abs(qi.value);
    }
    s.err += cancel * kEps;
    return s;
}

IndicatorSample trace_indicator_sample(const BoundaryTrace& trace, const BoundaryLoad& load,
                                       double x1, double tau, double weight_s,
                                       const PlateGeometry& geom, const Material& mat) {
    if (!(tau > 0.0)) throw std::invalid_argument("indicator needs tau > 0");
    if (!(weight_s > 0.0)) throw std::invalid_argument("weight radius must be positive");
    if (trace.edges.empty()) throw std::invalid_argument("boundary trace is empty");
    const ProbePoint p{x1, geom.probe_y2(), tau};
    const double shift = tau / (2.0 * weight_s);

    IndicatorSample s;
    s.tau = tau;
    double cancel = 0.0;
    for (const auto& e : trace.edges) {
        const Vec2 nu = outward_normal(e.side);
        const double inv_len = 1.0 / (e.hi - e.lo);

        const auto data_at = [&](double coord, Cx& gz, Cx& uz, Cx& w) {
            const Vec2 y = boundary_point(geom, e.side, coord);
            w = probe_w(y.x, y.y, p);
            const Vec2 u = trace_edge_eval(e, (coord - e.lo) * inv_len);
            const Vec2 g = load.eval(e.side, coord);
            gz = Cx{g.x, g.y};
            uz = Cx{u.x, u.y};
        };
        const auto f_i = [&](double coord) -> Cx {
            Cx gz, uz, w;
            data_at(coord, gz, uz, w);
            return probe_scalar(w, tau, shift) * gz -
                   probe_traction_scalar(w, tau, mat, nu, shift) * uz;
        };
        const auto f_p = [&](double coord) -> Cx {
            Cx gz, uz, w;
            data_at(coord, gz, uz, w);
            return probe_dtau_scalar(w, tau, shift) * gz -
                   probe_dtau_traction_scalar(w, tau, mat, nu, shift) * uz;
        };

        // Edges under the probe see the sharp modulus peak of the field;
        // split those a couple of levels before trusting the error test.
        int force = 0;
        if (e.side == Side::top &&
            e.lo <= x1 + 3.0 * geom.eps && e.hi >= x1 - 3.0 * geom.eps)
            force = 2;

        const EdgeQuad qi = integrate_edge(f_i, e.lo, e.hi, force);
        const EdgeQuad qp = integrate_edge(f_p, e.lo, e.hi, force);
        s.I += qi.val;
        s.Iprime += qp.val;
        s.err += qi.err;
        cancel += std::abs(qi.val);
    }
    // Cancellation across edges is the dominating error source once the
    // probe weight no longer compensates the boundary growth.
    s.err += cancel * kEps;
    return s;
}

namespace {

template <typename SampleFn>
IndicatorCurve build_curve(double x1, double x2, double weight_s, IndicatorRoute route,
                           const std::vector<double>& taus, SampleFn&& one) {
    validate_taus(taus);
    IndicatorCurve c;
    c.x1 = x1;
    c.x2 = x2;
    c.weight_s = weight_s;
    c.route = route;
    c.samples.reserve(taus.size());
    int bad = 0;
    for (double tau : taus) {
        IndicatorSample s = one(tau);
        if (!s.finite() || (s.I == Cx{} && s.Iprime == Cx{})) {
            ++bad;
            s.err = std::numeric_limits<double>::infinity();
        }
        c.samples.push_back(s);
    }
    c.usable = 5 * bad <= static_cast<int>(taus.size());
    return c;
}

}  // namespace

IndicatorCurve indicator_from_jump(const JumpOnSigma& jump, double x1,
                                   const std::vector<double>& taus, double weight_s,
                                   const PlateGeometry& geom, const Material& mat) {
    return build_curve(x1, geom.probe_y2(), weight_s, IndicatorRoute::crack, taus,
                       [&](double tau) {
                           return jump_indicator_sample(jump, x1, tau, weight_s, geom, mat);
                       });
}

IndicatorCurve indicator_from_trace(const BoundaryTrace& trace, const BoundaryLoad& load,
                                    double x1, const std::vector<double>& taus, double weight_s,
                                    const PlateGeometry& geom, const Material& mat) {
    return build_curve(x1, geom.probe_y2(), weight_s, IndicatorRoute::boundary, taus,
                       [&](double tau) {
                           return trace_indicator_sample(trace, load, x1, tau, weight_s, geom,
                                                         mat);
                       });
}

IndicatorCurve assemble_curve(double x1, double x2, double weight_s, IndicatorRoute route,
                              std::vector<IndicatorSample> samples) {
    IndicatorCurve c;
    c.x1 = x1;
    c.x2 = x2;
    c.weight_s = weight_s;
    c.route = route;
    c.samples = std::move(samples);
    int bad = 0;
    for (auto& s : c.samples) {
        if (!s.finite() || (s.I == Cx{} && s.Iprime == Cx{})) {
            ++bad;
            s.err = std::numeric_limits<double>::infinity();
        }
    }
    c.usable = 5 * bad <= static_cast<int>(c.samples.size());
    return c;
}

IndicatorCurve reweight_curve(const IndicatorCurve& curve, double new_weight_s) {
    if (!(new_weight_s > 0.0)) throw std::invalid_argument("weight radius must be positive");
    IndicatorCurve out = curve;
    out.weight_s = new_weight_s;
    const double drate = 0.5 / curve.weight_s - 0.5 / new_weight_s;
    int bad = 0;
    for (auto& s : out.samples) {
        const double f = std::exp(s.tau * drate);
        s.I *= f;
        s.Iprime *= f;
        s.err *= f;
        if (!s.finite() || (s.I == Cx{} && s.Iprime == Cx{})) {
            ++bad;
            s.err = std::numeric_limits<double>::infinity();
        }
    }
    out.usable = 5 * bad <= static_cast<int>(out.samples.size());
    return out;
}

std::vector<double> geometric_tau_grid(double tau_lo, int count, double ratio) {
    if (!(tau_lo > 0.0) || count < 1 || !(ratio > 1.0))
        throw std::invalid_argument("tau grid needs tau_lo > 0, count >= 1, ratio > 1");
    std::vector<double> taus(static_cast<size_t>(count));
    double t = tau_lo;
    for (auto& v : taus) {
        v = t;
        t *= ratio;
    }
    return taus;
}

}  // namespace weldcrack
