#include "weldcrack/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace weldcrack {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct LinFit {
    double slope = 0.0, intercept = 0.0, r2 = 1.0, rms = 0.0;
};

LinFit linreg(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LinFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    const double ssres = std::max(0.0, syy - f.slope * sxy);
    f.r2 = syy > 0.0 ? 1.0 - ssres / syy : 1.0;
    f.rms = std::sqrt(ssres / static_cast<double>(n));
    return f;
}

struct UsablePoint {
    size_t index;
    double tau;
    double logmod;
    Cx ratio;
};

std::vector<UsablePoint> usable_points(const IndicatorCurve& curve) {
    std::vector<UsablePoint> pts;
    for (size_t i = 0; i < curve.samples.size(); ++i) {
        const auto& s = curve.samples[i];
        if (!sample_usable(s)) continue;
        pts.push_back({i, s.tau, std::log(std::abs(s.I)), s.Iprime / s.I});
    }
    return pts;
}

}  // namespace

bool sample_usable(const IndicatorSample& s) {
    const double mod = std::abs(s.I);
    return s.finite() && mod > 0.0 && s.err < 0.5 * mod;
}

DecayFit fit_decay_rate(const IndicatorCurve& curve) {
    DecayFit out;
    if (!curve.usable) {
        out.reason = "curve flagged unusable (too many out-of-range samples)";
        return out;
    }
    const auto pts = usable_points(curve);
    const size_t m = pts.size();
    if (m < 8) {
        out.reason = "fewer than 8 usable samples";
        return out;
    }

    // Largest tail window with a convincing straight line.  The contact tail
    // carries a known tau^{-1/2} prefactor on top of the exponential; remove
    // it before fitting, otherwise a probe whose tangency radius equals the
    // weight radius (pure algebraic tail) never looks straight in tau.
    bool found = false;
    LinFit best;
    size_t best_start = 0;
    for (size_t start = 0; start + 6 <= m; ++start) {
        std::vector<double> xs, ys;
        xs.reserve(m - start);
        ys.reserve(m - start);
        for (size_t i = start; i < m; ++i) {
            xs.push_back(pts[i].tau);
            ys.push_back(pts[i].logmod + 0.5 * std::log(pts[i].tau));
        }
        const LinFit f = linreg(xs, ys);
        // r2 certifies straightness only when the line carries real variation;
        // a flat tail (tangency radius equal to the weight radius) has next to
        // none, so accept on absolute per-point misfit as well.
        if (f.r2 >= 0.999 || f.rms <= 5e-3) {
            best = f;
            best_start = start;
            found = true;
            break;
        }
    }
    if (!found) {
        out.reason = "no tail window reaches the required fit quality";
        return out;
    }

    out.slope_w = best.slope;
    out.slope = best.slope + 0.5 / curve.weight_s;
    out.r2 = best.r2;
    out.window_lo = pts[best_start].tau;
    out.window_hi = pts[m - 1].tau;
    for (size_t i = best_start; i < m; ++i) out.window.push_back(pts[i].index);
    if (!(out.slope > 0.0)) {
        out.reason = "nonpositive de-weighted growth rate";
        return out;
    }
    out.s_hat = 0.5 / out.slope;
    out.ok = true;
    return out;
}

LogDerivative log_derivative_limit(const IndicatorCurve& curve, const DecayFit& fit) {
    LogDerivative out;
    if (!fit.ok) {
        out.reason = "modulus fit failed: " + fit.reason;
        return out;
    }
    // Complex least squares for ratio = L + c1 / tau over the fit window.
    Cx sr{}, sxr{};
    double sx = 0.0, sxx = 0.0;
    size_t n = 0;
    Cx raw{};
    for (size_t idx : fit.window) {
        const auto& s = curve.samples[idx];
        if (!sample_usable(s)) continue;
        const Cx r = s.Iprime / s.I;
        const double x = 1.0 / s.tau;
        sr += r;
        sxr += x * r;
        sx += x;
        sxx += x * x;
        raw = r;
        ++n;
    }
    if (n < 3) {
        out.reason = "fewer than 3 usable ratios in the fit window";
        return out;
    }
    const double nn = static_cast<double>(n);
    const double det = nn * sxx - sx * sx;
    if (!(det > 0.0)) {
        out.reason = "degenerate tau grid for the 1/tau extrapolation";
        return out;
    }
    out.L = (sxx * sr - sx * sxr) / det;
    out.c1 = (nn * sxr - sx * sr) / det;
    out.raw_last = raw;
    out.ok = true;
    return out;
}

LogDerivative log_derivative_limit(const IndicatorCurve& curve) {
    return log_derivative_limit(curve, fit_decay_rate(curve));
}

const char* parity_name(TipParity p) {
    switch (p) {
        case TipParity::odd: return "odd";
        case TipParity::even: return "even";
        case TipParity::indeterminate: return "indeterminate";
    }
    return "?";
}

const char* confidence_name(Confidence c) {
    return c == Confidence::high ? "high" : "low";
}

TipEstimate recover_tip_from(double x1, double s_hat, Cx L, const PlateGeometry& geom) {
    TipEstimate e;
    e.x1 = x1;
    e.s_hat = s_hat;
    e.L = L;
    if (!(s_hat > 0.0) || !std::isfinite(L.real()) || !std::isfinite(L.imag())) {
        e.reason = "invalid inputs to the geometry step";
        return e;
    }
    e.t = 2.0 * s_hat * L.imag();
    const double at = std::abs(e.t);
    e.alpha_hat = 0.5 * kPi - 2.0 * std::atan(at);
    if (at < 0.02) {
        // Tangency too symmetric to pick a side; the touch point is below x.
        e.parity = TipParity::indeterminate;
        e.c_hat = x1;
    } else {
        e.parity = e.t > 0.0 ? TipParity::odd : TipParity::even;
        const double side = e.parity == TipParity::odd ? -1.0 : 1.0;
        e.c_hat = x1 + side * s_hat * std::cos(e.alpha_hat);
    }
    const double drop = geom.probe_y2() - geom.c;
    e.consistency_rel = std::abs(s_hat * (1.0 + std::sin(e.alpha_hat)) - drop) / drop;
    e.confidence = e.consistency_rel <= 0.10 ? Confidence::high : Confidence::low;
    e.ok = true;
    return e;
}

TipEstimate recover_tip(const IndicatorCurve& curve, const PlateGeometry& geom) {
    const DecayFit fit = fit_decay_rate(curve);
    if (!fit.ok) {
        TipEstimate e;
        e.x1 = curve.x1;
        e.reason = "modulus fit failed: " + fit.reason;
        e.fit = fit;
        return e;
    }
    const LogDerivative ld = log_derivative_limit(curve, fit);
    if (!ld.ok) {
        TipEstimate e;
        e.x1 = curve.x1;
        e.reason = ld.reason;
        e.fit = fit;
        return e;
    }
    TipEstimate e = recover_tip_from(curve.x1, fit.s_hat, ld.L, geom);
    e.fit = fit;
    return e;
}

const char* verdict_name(ScanVerdict v) {
    switch (v) {
        case ScanVerdict::tip: return "tip";
        case ScanVerdict::non_tip: return "non-tip";
        case ScanVerdict::indeterminate: return "indeterminate";
    }
    return "?";
}

ScanPoint classify_probe(const IndicatorCurve& curve, double weight_s) {
    if (std::abs(curve.weight_s - weight_s) > 1e-12 * weight_s)
        throw std::invalid_argument("curve weight disagrees with the scan radius");
    ScanPoint pt;
    pt.x1 = curve.x1;
    const auto pts = usable_points(curve);
    pt.n_usable = static_cast<int>(pts.size());
    if (pts.size() < 6) return pt;

    std::vector<double> logt, tau, y;
    for (const auto& p : pts) {
        logt.push_back(std::log(p.tau));
        tau.push_back(p.tau);
        y.push_back(p.logmod);
    }
    const LinFit alg = linreg(logt, y);
    const LinFit expo = linreg(tau, y);
    pt.p_hat = -alg.slope;
    pt.q_hat = -expo.slope;

    const double floor = 1e-300;
    const double ra = alg.rms + floor, rb = expo.rms + floor;
    pt.score = std::max(ra, rb) / std::min(ra, rb);
    pt.verdict = ra <= rb ? ScanVerdict::tip : ScanVerdict::non_tip;
    return pt;
}

std::vector<ScanPoint> scan_fixed_radius(const std::vector<IndicatorCurve>& curves,
                                         double weight_s) {
    std::vector<ScanPoint> out;
    out.reserve(curves.size());
    for (const auto& c : curves) out.push_back(classify_probe(c, weight_s));
    return out;
}

}  // namespace weldcrack
