#include "weldcrack/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "weldcrack/quadrature.hpp"

namespace weldcrack {

namespace {

constexpr double kPi = 3.14159265358979323846;

// (-1)^m without pow.
double neg1pow(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

// ----------------------------------------------------------------------------
// Crack-tip opening series
// ----------------------------------------------------------------------------

void validate_series(const SeriesCoefficients& sc, const PlateGeometry& geom,
                     const CrackConfig& cracks) {
    const int nt = static_cast<int>(cracks.tips.size());
    if (sc.tip_index < 0 || sc.tip_index >= nt)
        throw std::invalid_argument("series tip_index out of range");
    if (!cracks.is_interior_tip(sc.tip_index))
        throw std::invalid_argument("series tip must be an interior tip");
    if (sc.modes.empty()) throw std::invalid_argument("series needs at least one mode");
    if (!(sc.eta > 0.0)) throw std::invalid_argument("series window radius must be positive");

    const double t = cracks.tips[static_cast<size_t>(sc.tip_index)];
    double nearest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nt; ++i) {
        if (i == sc.tip_index) continue;
        nearest = std::min(nearest, std::abs(cracks.tips[static_cast<size_t>(i)] - t));
    }
    if (!(sc.eta < 0.5 * nearest))
        throw std::invalid_argument("series window reaches past half the nearest tip distance");
    if (!(sc.eta < std::min(geom.b - geom.c, geom.c)))
        throw std::invalid_argument("series window reaches the top or bottom edge");
}

Vec2 series_jump(double r, const SeriesCoefficients& sc, const Material& mat) {
    if (r < 0.0) throw std::invalid_argument("series distance must be nonnegative");
    const double kap = kolosov_kappa(mat);
    const double pref = (kap + 1.0) / mat.mu;
    double j1 = 0.0, j2 = 0.0;
    const double rt = std::sqrt(r);
    // r^{(2k-1)/2} = rt * r^{k-1}, built up multiplicatively.
    double rpow = rt;
    for (int k = 1; k <= sc.K(); ++k) {
        const auto [A, B] = sc.modes[static_cast<size_t>(k - 1)];
        const double sign = neg1pow(k + sc.tip_index);
        j1 += sign * rpow * (-B);
        j2 += sign * rpow * A;
        rpow *= r;
    }
    return Vec2{pref * j1, pref * j2};
}

double jump_window(double r, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("window radius must be positive");
    const double half = 0.5 * eta;
    if (r <= half) return 1.0;
    if (r >= eta) return 0.0;
    const double u = (r - half) / half;
    const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));  // quintic smoothstep
    return 1.0 - s;
}

JumpOnSigma make_windowed_jump(const SeriesCoefficients& sc, const PlateGeometry& geom,
                               const CrackConfig& cracks, const Material& mat, double r_lo,
                               double r_hi) {
    validate_series(sc, geom, cracks);
    if (r_lo < 0.0 || !(r_hi > r_lo))
        throw std::invalid_argument("jump restriction must satisfy 0 <= r_lo < r_hi");

    const double t = cracks.tips[static_cast<size_t>(sc.tip_index)];
    const double hi_r = std::min(sc.eta, r_hi);
    JumpOnSigma jump;
    if (!(hi_r > r_lo)) return jump;  // restriction excludes the whole window

    const bool odd = (sc.tip_index % 2 != 0);
    SeriesCoefficients local = sc;
    const Material m = mat;
    JumpPiece piece;
    if (odd) {
        // Right end of a crack: the adjacent face extends to the left.
        piece.lo = t - hi_r;
        piece.hi = t - r_lo;
        piece.value = [t, local, m](double y1) {
            const double r = t - y1;
            const Vec2 s = series_jump(std::max(r, 0.0), local, m);
            const double w = jump_window(std::max(r, 0.0), local.eta);
            return Vec2{w * s.x, w * s.y};
        };
        if (r_lo == 0.0) piece.sqrt_anchor = piece.hi;
    } else {
        piece.lo = t + r_lo;
        piece.hi = t + hi_r;
        piece.value = [t, local, m](double y1) {
            const double r = y1 - t;
            const Vec2 s = series_jump(std::max(r, 0.0), local, m);
            const double w = jump_window(std::max(r, 0.0), local.eta);
            return Vec2{w * s.x, w * s.y};
        };
        if (r_lo == 0.0) piece.sqrt_anchor = piece.lo;
    }
    jump.pieces.push_back(std::move(piece));
    return jump;
}

JumpOnSigma make_windowed_jumps(const std::vector<SeriesCoefficients>& list,
                                const PlateGeometry& geom, const CrackConfig& cracks,
                                const Material& mat) {
    JumpOnSigma out;
    for (const auto& sc : list)
        out = JumpOnSigma::superpose(out, make_windowed_jump(sc, geom, cracks, mat));
    return out;
}

// ----------------------------------------------------------------------------
// Model oscillatory tip integrals
// ----------------------------------------------------------------------------

AlphaKernelParams::AlphaKernelParams(double s0_, double alpha_, bool j_odd_, double eta_prime_)
    : s0(s0_), alpha(alpha_), j_odd(j_odd_), eta_prime(eta_prime_) {
    if (!(s0 > 0.0)) throw std::invalid_argument("tangency radius must be positive");
    if (!(alpha > -0.5 * kPi - 1e-12 && alpha <= 0.5 * kPi + 1e-12))
        throw std::invalid_argument("contact angle outside ]-pi/2, pi/2]");
    if (!(eta_prime > 0.0)) throw std::invalid_argument("integration limit must be positive");
}

double default_eta_prime(double s0, double alpha, double delta) {
    if (!(s0 > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("default_eta_prime needs s0 > 0 and delta > 0");
    const double grow = (s0 + delta) * (s0 + delta) - (s0 * std::sin(alpha)) * (s0 * std::sin(alpha));
    return std::sqrt(grow) - s0 * std::cos(alpha);
}

namespace {

// Shared driver: integrates r^{n-1/2} g(den) exp(sgn i tau / den - shift) over
// [0, eta'] after the substitution r = t^2, with panel seeds spaced by a third
// of the local oscillation wavelength 2 pi |den|^2 / tau.  `extra_dtau`
// multiplies the integrand by the tau-derivative factor sgn i / den.
OscResult tip_integral_driver(int n, double tau, const AlphaKernelParams& prm, double shift,
                              double rel_tol, bool extra_dtau) {
    if (n < 1) throw std::invalid_argument("tip integral mode must satisfy n >= 1");
    if (!(tau > 0.0)) throw std::invalid_argument("tip integral needs tau > 0");

    const double sgn = prm.j_odd ? 1.0 : -1.0;
    // j odd pairs with conj(z), j even with z itself.
    const Cx z{-std::cos(prm.alpha), 1.0 + std::sin(prm.alpha)};
    const Cx zc = prm.j_odd ? std::conj(z) : z;

    auto den_at = [&](double r) { return Cx{r, 0.0} - prm.s0 * zc; };

    // Panel seeds in t = sqrt(r).
    std::vector<double> seeds;
    {
        double r = 0.0;
        const int max_seeds = 20000;
        while (static_cast<int>(seeds.size()) < max_seeds) {
            const double lam = 2.0 * kPi * std::norm(den_at(r)) / tau;
            r += lam / 3.0;
            if (r >= prm.eta_prime) break;
            seeds.push_back(std::sqrt(r));
        }
    }

    const int two_n = 2 * n;
    auto integrand = [&](double t) -> Cx {
        const double r = t * t;
        const Cx den = den_at(r);
        const Cx inv = 1.0 / den;
        Cx val = 2.0 * std::pow(t, two_n) * inv * inv *
                 std::exp(Cx{0.0, sgn * tau} * inv - shift);
        if (extra_dtau) val *= Cx{0.0, sgn} * inv;
        return val;
    };

    const auto q = quad_gk15(integrand, 0.0, std::sqrt(prm.eta_prime), 0.0, rel_tol,
                                 40000, &seeds);
    return OscResult{q.value, q.error, q.converged};
}

}  // namespace

OscResult tip_oscillatory_integral(int n, double tau, const AlphaKernelParams& prm, double shift,
                                   double rel_tol) {
    return tip_integral_driver(n, tau, prm, shift, rel_tol, false);
}

OscResult tip_oscillatory_integral_dtau(int n, double tau, const AlphaKernelParams& prm,
                                        double shift, double rel_tol) {
    return tip_integral_driver(n, tau, prm, shift, rel_tol, true);
}

double tip_phase_rate(const AlphaKernelParams& prm) {
    const double sp = prm.j_odd ? 1.0 : -1.0;
    return sp * std::cos(prm.alpha) / (2.0 * prm.s0 * (1.0 + std::sin(prm.alpha)));
}

OscResult scaled_tip_integral(int n, double tau, const AlphaKernelParams& prm, double rel_tol) {
    const double theta = tip_phase_rate(prm);
    const OscResult base =
        tip_oscillatory_integral(n, tau, prm, tau / (2.0 * prm.s0), rel_tol);
    const double amp = std::pow(tau, n + 0.5);
    const Cx rot = std::exp(Cx{0.0, -theta * tau});
    return OscResult{amp * rot * base.value, amp * base.error, base.converged};
}

Cx tip_integral_limit(int n, const AlphaKernelParams& prm) {
    if (n < 1) throw std::invalid_argument("tip integral mode must satisfy n >= 1");
    const double pj = prm.j_odd ? -1.0 : 1.0;  // (-1)^j
    const double sp = -pj;                     // (-1)^{j+1}
    const double half_pow = n - 0.5;           // (2n-1)/2
    const double mag = std::pow(prm.s0, 2 * n - 1) * std::pow(2.0, half_pow) *
                       std::pow(1.0 + std::sin(prm.alpha), half_pow) * std::tgamma(n + 0.5);
    return pj * Cx{0.0, 1.0} * mag * std::exp(Cx{0.0, sp * half_pow * prm.alpha});
}

Cx tip_coefficient(int k, const AlphaKernelParams& prm, const SeriesCoefficients& sc,
                   const Material& mat) {
    if (k < 1 || k > sc.K()) throw std::invalid_argument("tip coefficient mode out of range");
    const auto [A, B] = sc.modes[static_cast<size_t>(k - 1)];
    const double kap = kolosov_kappa(mat);
    const double sp = prm.j_odd ? 1.0 : -1.0;  // (-1)^{j+1}
    const double half_pow = k - 0.5;           // (2k-1)/2
    const double mag = neg1pow(k + 1) * (kap + 1.0) * std::pow(prm.s0, 2 * k - 1) *
                       std::pow(2.0, k + 0.5) *
                       std::pow(1.0 + std::sin(prm.alpha), half_pow) * std::tgamma(k + 0.5);
    return Cx{0.0, 1.0} * mag * std::exp(Cx{0.0, sp * half_pow * prm.alpha}) * Cx{B, -A};
}

}  // namespace weldcrack
