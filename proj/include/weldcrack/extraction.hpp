#pragma once

#include <complex>
#include <string>
#include <vector>

#include "weldcrack/geometry.hpp"
#include "weldcrack/indicator.hpp"

namespace weldcrack {

// ============================================================================
// Reconstruction from indicator curves
// ============================================================================
//
// An indicator curve at probe abscissa x1 behaves for large tau like
//
//     |I| ~ C e^{tau/(2 s)} tau^{-1/2},      I'/I -> 1/(2 s) + i theta,
//
// where s is the tangency radius of the disc hanging below the probe and
// theta encodes the contact angle alpha and the side (parity) of the touched
// crack tip.  The fits here turn sampled curves into (s, alpha, parity) and
// finally into a tip abscissa estimate; the fixed-radius scan separates
// probes whose disc touches a tip (algebraic tail) from all others
// (exponential tail) without any fitting of crack positions.
//
// All routines are soft-failing: bad or insufficient data sets ok = false
// and a human-readable reason instead of throwing, because sweeping over
// probe positions routinely produces curves with nothing to extract.

// A sample is usable when it is finite, nonzero, and its quadrature error
// estimate stays below half its modulus.
bool sample_usable(const IndicatorSample& s);

struct DecayFit {
    bool ok = false;
    std::string reason;
    double slope_w = 0.0;  // exponential rate of the weighted curve (the known
                           // tau^{-1/2} prefactor is removed before fitting)
    double slope = 0.0;    // de-weighted rate, slope_w + 1/(2 s_w)
    double s_hat = 0.0;    // 1 / (2 slope)
    double r2 = 0.0;
    double window_lo = 0.0, window_hi = 0.0;  // tau range of the fitted window
    std::vector<size_t> window;               // indices into curve.samples
};

// Least-squares line through (tau, log(|I_w| sqrt(tau))) on the largest tail
// window of usable samples with a convincing fit: r^2 >= 0.999, or a per-point
// rms misfit below 0.5% for flat tails whose r^2 carries no information (at
// least 6 points; needs at least 8 usable samples overall).
DecayFit fit_decay_rate(const IndicatorCurve& curve);

struct LogDerivative {
    bool ok = false;
    std::string reason;
    Cx L{};         // extrapolated limit of I'/I
    Cx c1{};        // coefficient of the 1/tau correction in the fit
    Cx raw_last{};  // unextrapolated ratio at the largest usable tau
};

// Complex least-squares fit  I'/I = L + c1/tau  on the same window as the
// modulus fit (the overload without a fit computes one first).
LogDerivative log_derivative_limit(const IndicatorCurve& curve, const DecayFit& fit);
LogDerivative log_derivative_limit(const IndicatorCurve& curve);

enum class TipParity { odd, even, indeterminate };
enum class Confidence { high, low };

const char* parity_name(TipParity p);
const char* confidence_name(Confidence c);

struct TipEstimate {
    bool ok = false;
    std::string reason;
    double x1 = 0.0;   // probe abscissa the estimate belongs to
    double s_hat = 0.0;
    Cx L{};
    double t = 0.0;    // parity discriminant 2 s_hat Im L
    TipParity parity = TipParity::indeterminate;
    double alpha_hat = 0.0;
    double c_hat = 0.0;  // recovered tip abscissa (probe abscissa when parity is open)
    Confidence confidence = Confidence::low;
    double consistency_rel = 0.0;  // |s_hat (1+sin alpha) - (x2 - c)| / (x2 - c)
    DecayFit fit;
};

// Pure geometry step: parity from the sign of t = 2 s_hat Im L (|t| < 0.02
// counts as a tie and leaves the side open), alpha = pi/2 - 2 atan|t|, tip
// abscissa x1 -/+ s_hat cos(alpha) for odd/even parity.  Confidence drops
// when s_hat (1 + sin alpha) misses the probe drop height x2 - c by more
// than 10%.
TipEstimate recover_tip_from(double x1, double s_hat, Cx L, const PlateGeometry& geom);

// Full chain: modulus fit, log-derivative fit, geometry step.
TipEstimate recover_tip(const IndicatorCurve& curve, const PlateGeometry& geom);

enum class ScanVerdict { tip, non_tip, indeterminate };
const char* verdict_name(ScanVerdict v);

struct ScanPoint {
    double x1 = 0.0;
    ScanVerdict verdict = ScanVerdict::indeterminate;
    double p_hat = 0.0;  // algebraic model |I| ~ tau^{-p}
    double q_hat = 0.0;  // exponential model |I| ~ e^{-q tau}
    double score = 0.0;  // rms(rejected model) / rms(chosen model)
    int n_usable = 0;
};

// Model comparison for one curve weighted at the common scan radius: the
// algebraic tail wins at probes whose disc touches a crack tip, the
// exponential tail everywhere else.  A verdict needs one model to beat the
// other by 2x in residual RMS; closer calls still report the better model
// but with score < 2.  Throws if the curve's weight disagrees with the scan
// radius.
ScanPoint classify_probe(const IndicatorCurve& curve, double weight_s);

std::vector<ScanPoint> scan_fixed_radius(const std::vector<IndicatorCurve>& curves,
                                         double weight_s);

}  // namespace weldcrack
