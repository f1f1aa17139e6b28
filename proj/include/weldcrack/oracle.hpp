#pragma once

#include <complex>
#include <vector>

#include "weldcrack/geometry.hpp"
#include "weldcrack/jump.hpp"
#include "weldcrack/material.hpp"

namespace weldcrack {

// ============================================================================
// Semi-analytic ground truth
// ============================================================================
//
// Everything here is independent of the finite-element solver: crack-tip
// opening series with known coefficients, the model oscillatory integrals
// that govern the indicator tail, their closed-form large-tau limits, and
// the resulting leading complex amplitudes of the weighted indicator.  The
// FEM pipeline is validated against these kernels, never the other way
// around.

using Cx = std::complex<double>;

// ----------------------------------------------------------------------------
// Crack-tip opening series
// ----------------------------------------------------------------------------
//
// Near an interior tip t_j, the crack opening is an odd-half-power series in
// the distance r along the adjacent crack face:
//
//   u+ - u-  =  ((kappa+1)/mu) * sum_k (-1)^{k+j} r^{(2k-1)/2} (-B_{2k-1}, A_{2k-1})
//
// with real mode coefficients (A_{2k-1}, B_{2k-1}).  Only the listed modes
// are present, so the synthetic jump is exact, not asymptotic.

struct SeriesCoefficients {
    int tip_index = 1;                             // index into CrackConfig::tips (interior)
    std::vector<std::pair<double, double>> modes;  // (A_{2k-1}, B_{2k-1}), k = 1..K
    double eta = 0.0;                              // window radius of the synthetic jump

    int K() const { return static_cast<int>(modes.size()); }
};

// Throws unless the tip is interior, K >= 1, and eta clears both the
// neighbouring tips (half the nearest tip distance) and the junction's
// distance to the top/bottom edges.
void validate_series(const SeriesCoefficients& sc, const PlateGeometry& geom,
                     const CrackConfig& cracks);

// Series value at distance r from the tip (no window).
Vec2 series_jump(double r, const SeriesCoefficients& sc, const Material& mat);

// C2 cutoff: 1 on [0, eta/2], quintic-smoothstep transition, 0 from eta on.
double jump_window(double r, double eta);

// Windowed synthetic jump chi(r) * series on the crack face adjacent to the
// tip (left face for odd tip index, right face for even), restricted to
// r in [r_lo, r_hi] when given; zero elsewhere on the junction.
JumpOnSigma make_windowed_jump(const SeriesCoefficients& sc, const PlateGeometry& geom,
                               const CrackConfig& cracks, const Material& mat,
                               double r_lo = 0.0,
                               double r_hi = std::numeric_limits<double>::infinity());

// Superposition over several tips.
JumpOnSigma make_windowed_jumps(const std::vector<SeriesCoefficients>& list,
                                const PlateGeometry& geom, const CrackConfig& cracks,
                                const Material& mat);

// ----------------------------------------------------------------------------
// Model oscillatory tip integrals
// ----------------------------------------------------------------------------
//
// With z = -cos(alpha) + i (1 + sin(alpha)) and the tangency radius s0, the
// indicator contribution of one tip reduces to the model integrals
//
//   odd tip:   I_n(tau) = int_0^{eta'} r^{(2n-1)/2} / (r - s0 conj(z))^2
//                                    * exp( i tau / (r - s0 conj(z))) dr
//   even tip:  the complex conjugate kernel (z in place of conj(z), -i tau).
//
// The integrand peaks at r = 0 with modulus e^{tau/(2 s0)} and oscillates
// with local wavelength 2 pi |r - s0 z|^2 / tau; the integrator substitutes
// r = t^2 and pre-splits panels at that wavelength.  `shift` is subtracted
// from the exponent, so passing tau/(2 s0) evaluates the weighted integral
// directly at O(1) magnitudes.

struct AlphaKernelParams {
    double s0 = 1.0;        // tangency radius
    double alpha = 0.0;     // contact angle in ]-pi/2, pi/2]
    bool j_odd = true;      // parity of the touching tip index
    double eta_prime = 0.1; // upper integration limit

    AlphaKernelParams() = default;
    AlphaKernelParams(double s0_, double alpha_, bool j_odd_, double eta_prime_);
};

// Integration limit induced by clipping the tangent disc grown by delta
// against the junction line: sqrt((s0+delta)^2 - (s0 sin alpha)^2) - s0 cos alpha.
double default_eta_prime(double s0, double alpha, double delta);

struct OscResult {
    Cx value{};
    double error = 0.0;
    bool converged = false;
};

// Weighted model integral e^{-shift} I_n(tau) (pass shift = tau/(2 s0) for
// the O(1)-scaled tail) and its exact tau-derivative.
OscResult tip_oscillatory_integral(int n, double tau, const AlphaKernelParams& prm,
                                   double shift, double rel_tol = 1e-11);
OscResult tip_oscillatory_integral_dtau(int n, double tau, const AlphaKernelParams& prm,
                                        double shift, double rel_tol = 1e-11);

// Oscillation rate of the tip phase: theta = (-1)^{j+1} cos(alpha) /
// (2 s0 (1 + sin alpha)); the weighted tip mode behaves like e^{i theta tau}.
double tip_phase_rate(const AlphaKernelParams& prm);

// Fully scaled integral tau^{(2n+1)/2} e^{-i theta tau} e^{-tau/(2 s0)} I_n(tau),
// the quantity with a finite nonzero limit as tau -> infinity.
OscResult scaled_tip_integral(int n, double tau, const AlphaKernelParams& prm,
                              double rel_tol = 1e-11);

// Closed form of that limit:
//   (-1)^j i s0^{2n-1} 2^{(2n-1)/2} (1+sin alpha)^{(2n-1)/2}
//                  e^{(-1)^{j+1} i (2n-1)/2 alpha} Gamma((2n+1)/2).
Cx tip_integral_limit(int n, const AlphaKernelParams& prm);

// Leading complex amplitude of the k-th tip mode of the weighted indicator:
// for a jump with coefficients (A_{2k-1}, B_{2k-1}) at the touching tip,
//
//   e^{-tau/(2 s0)} I(tau; x)  ~  sum_k C_k e^{i theta tau} tau^{-(2k-1)/2},
//
//   C_k = i (kappa+1) (-1)^{k+1} s0^{2k-1} 2^{(2k+1)/2} (1+sin alpha)^{(2k-1)/2}
//                e^{(-1)^{j+1} i (2k-1)/2 alpha} Gamma((2k+1)/2) (B_{2k-1} - i A_{2k-1}).
//
// The bilinear pairing (B, -A) . (e1 + i e2) supplies the factor B - i A.
Cx tip_coefficient(int k, const AlphaKernelParams& prm, const SeriesCoefficients& sc,
                   const Material& mat);

}  // namespace weldcrack
