#pragma once

#include <complex>
#include <vector>

#include "weldcrack/geometry.hpp"
#include "weldcrack/jump.hpp"
#include "weldcrack/loads.hpp"
#include "weldcrack/material.hpp"
#include "weldcrack/trace.hpp"

namespace weldcrack {

// ============================================================================
// Probe indicator
// ============================================================================
//
// The pairing of measured data with the exponential probe field:
//
//     I(tau; x) = int_{boundary} ( g . v - u . sigma(v) nu ) ds,
//
// computable from one traction/displacement pair alone.  For the cracked
// plate the same number equals
//
//     I(tau; x) = - int_{junction} (u+ - u-) . sigma(v) e2 dy1,
//
// so it can also be evaluated straight from a crack-opening description;
// keeping both routes independent is what lets the boundary pipeline be
// checked against semi-analytic ground truth.
//
// Raw indicators grow like e^{tau/(2 s)} with the tangency radius s, so all
// stored samples are pre-weighted: a curve with weight radius s_w holds
// e^{-tau/(2 s_w)} I(tau) and e^{-tau/(2 s_w)} dI/dtau.  The ratio
// Iprime / I is weight-independent, and re-weighting is an exact exponential
// rescale of both components.

using Cx = std::complex<double>;

enum class IndicatorRoute { boundary, crack };

struct IndicatorSample {
    double tau = 0.0;
    Cx I{};       // e^{-tau/(2 s_w)} I(tau)
    Cx Iprime{};  // e^{-tau/(2 s_w)} dI/dtau
    double err = 0.0;  // quadrature error estimate, same weighting

    bool finite() const;
};

struct IndicatorCurve {
    double x1 = 0.0;
    double x2 = 0.0;       // observation ordinate, b + eps
    double weight_s = 1.0; // declared weight radius s_w
    IndicatorRoute route = IndicatorRoute::crack;
    std::vector<IndicatorSample> samples;
    // False when more than 20% of the samples over- or underflowed out of
    // double range; such curves must not be fed to the reconstruction fits.
    bool usable = true;
};

// One weighted sample through the crack-opening route.
IndicatorSample jump_indicator_sample(const JumpOnSigma& jump, double x1, double tau,
                                      double weight_s, const PlateGeometry& geom,
                                      const Material& mat);

// One weighted sample through the boundary route.
IndicatorSample trace_indicator_sample(const BoundaryTrace& trace, const BoundaryLoad& load,
                                       double x1, double tau, double weight_s,
                                       const PlateGeometry& geom, const Material& mat);

// Full curves over a tau grid (strictly increasing, all positive).
IndicatorCurve indicator_from_jump(const JumpOnSigma& jump, double x1,
                                   const std::vector<double>& taus, double weight_s,
                                   const PlateGeometry& geom, const Material& mat);

IndicatorCurve indicator_from_trace(const BoundaryTrace& trace, const BoundaryLoad& load,
                                    double x1, const std::vector<double>& taus, double weight_s,
                                    const PlateGeometry& geom, const Material& mat);

// Exact change of weight radius: multiplies every sample by
// e^{tau (1/(2 s_old) - 1/(2 s_new))} and re-flags usability.
IndicatorCurve reweight_curve(const IndicatorCurve& curve, double new_weight_s);

// Applies the overflow bookkeeping to samples assembled elsewhere (e.g. read
// back from a curve file or truncated to a tau window).
IndicatorCurve assemble_curve(double x1, double x2, double weight_s, IndicatorRoute route,
                              std::vector<IndicatorSample> samples);

// tau_k = tau_lo * ratio^k, k = 0 .. count-1.
std::vector<double> geometric_tau_grid(double tau_lo, int count, double ratio = 1.2);

}  // namespace weldcrack
