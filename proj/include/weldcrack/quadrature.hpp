#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace weldcrack {

// ============================================================================
// Adaptive Gauss(7)/Kronrod(15) quadrature
// ============================================================================
//
// Plain panel-stack adaptive scheme: evaluate the embedded pair on a panel,
// use |K15 - G7| as the error indicator, split the worst panel until the
// accumulated indicator meets the tolerance (or the panel budget runs out).
// Works for real- and complex-valued integrands; deterministic for a given
// integrand and tolerance.

namespace gk15 {

// Kronrod abscissae on [0,1) (positive half; the rule is symmetric).
// xg[2k+1] are the embedded 7-point Gauss abscissae.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

}  // namespace gk15

template <class T>
struct QuadResult {
    T value{};
    double error = 0.0;   // accumulated |K15 - G7| indicator
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

template <class T>
double quad_norm(const T& v) {
    return std::abs(v);
}

// One Gauss/Kronrod pass over [a, b]: returns (K15, |K15 - G7|).
template <class F, class T = std::decay_t<decltype(std::declval<F&>()(0.0))>>
std::pair<T, double> gk15_panel(F& f, double a, double b, int& evals) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T kron = gk15::wgk[7] * f(mid);
    T gauss = gk15::wg[3] * f(mid);
    ++evals;
    for (int k = 0; k < 7; ++k) {
        const double dx = half * gk15::xgk[k];
        const T lo = f(mid - dx);
        const T hi = f(mid + dx);
        evals += 2;
        kron += gk15::wgk[k] * (lo + hi);
        if (k % 2 == 1) gauss += gk15::wg[k / 2] * (lo + hi);
    }
    kron = half * kron;
    gauss = half * gauss;
    return {kron, quad_norm(T(kron - gauss))};
}

}  // namespace detail

// Adaptive integration of f over [a, b] to tolerance
// max(abs_tol, rel_tol * |result|).  `seeds` optionally pre-splits the range
// at the given interior breakpoints (useful for locally oscillatory
// integrands whose wavelength the caller knows).
template <class F, class T = std::decay_t<decltype(std::declval<F&>()(0.0))>>
QuadResult<T> quad_gk15(F&& f, double a, double b, double abs_tol, double rel_tol,
                        int max_panels = 20000, const std::vector<double>* seeds = nullptr) {
    QuadResult<T> out;
    if (a == b) {
        out.converged = true;
        return out;
    }

    struct Panel {
        double a, b, err;
        T val;
    };
    std::vector<Panel> panels;

    std::vector<double> knots;
    knots.push_back(a);
    if (seeds)
        for (double s : *seeds)
            if (s > a && s < b) knots.push_back(s);
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());

    T total{};
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        auto [v, e] = detail::gk15_panel(f, knots[i], knots[i + 1], out.evaluations);
        panels.push_back({knots[i], knots[i + 1], e, v});
        total += v;
        total_err += e;
    }

    auto tolerance = [&](const T& v) {
        return std::max(abs_tol, rel_tol * detail::quad_norm(v));
    };

    while (total_err > tolerance(total) && static_cast<int>(panels.size()) < max_panels) {
        // split the panel with the largest indicator
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err) worst = i;
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) break;  // interval exhausted at double precision
        auto [vl, el] = detail::gk15_panel(f, p.a, mid, out.evaluations);
        auto [vr, er] = detail::gk15_panel(f, mid, p.b, out.evaluations);
        panels[worst] = {p.a, mid, el, vl};
        panels.push_back({mid, p.b, er, vr});
        total += (vl + vr) - p.val;
        total_err += (el + er) - p.err;
        // periodically re-accumulate to keep the running sums honest
        if (panels.size() % 512 == 0) {
            total = T{};
            total_err = 0.0;
            for (const auto& q : panels) {
                total += q.val;
                total_err += q.err;
            }
        }
    }

    // final clean accumulation in panel order (deterministic)
    std::sort(panels.begin(), panels.end(),
              [](const Panel& l, const Panel& r) { return l.a < r.a; });
    total = T{};
    total_err = 0.0;
    for (const auto& q : panels) {
        total += q.val;
        total_err += q.err;
    }
    out.value = total;
    out.error = total_err;
    out.converged = total_err <= tolerance(total);
    return out;
}

}  // namespace weldcrack
