#pragma once

#include <complex>

#include "weldcrack/loads.hpp"
#include "weldcrack/material.hpp"

namespace weldcrack {

using Cx = std::complex<double>;

// ============================================================================
// Exponential probe field
// ============================================================================
//
// All probing is done with the divergence-free displacement field
//
//     V(y) = (e1 + i e2) * exp(-i tau / w),   w = (y1 - x1) + i (y2 - x2),
//
// an inversion-transformed complex-exponential solution of the homogeneous
// Navier system (holomorphic scalar times the fixed polarization e1 + i e2 is
// divergence free and harmonic, hence a solution for every Lame pair).  Its
// modulus is constant on circles through the probe point x; on the disc of
// radius s hanging below x it grows like e^{tau/(2s)} and outside it decays,
// which is what turns boundary data into tangency information.
//
// The tau-derivative field (-i/w) V and the tractions of both fields on a
// line with unit normal nu admit closed forms through the holomorphic stress
// function: for a displacement (e1 + i e2) P(w) with P holomorphic,
//
//     sigma(V) nu = 2 mu P'(w) (nu1 + i nu2) (e1 + i e2).
//
// A finite-difference test of this formula for rotated normals lives in the
// probe test suite.  All complex pairings used downstream are bilinear (no
// conjugation): the representation identities hold for the complex-linear
// extension of the real dot product.

struct ProbePoint {
    double x1 = 0.0;  // abscissa on the observation line
    double x2 = 0.0;  // ordinate (b + eps)
    double tau = 1.0; // exponential rate, > 0
};

struct CxVec2 {
    Cx a, b;  // components along e1, e2
};

// w = (y1 - x1) + i (y2 - x2).  The probe is singular at w = 0.
inline Cx probe_w(double y1, double y2, const ProbePoint& p) {
    return Cx(y1 - p.x1, y2 - p.x2);
}

// Scalar factors (the polarization (e1 + i e2) is applied by the wrappers).
// `shift` is subtracted from the exponent so tails can be evaluated in a
// pre-weighted form, exp(-i tau / w - shift), without overflow.
Cx probe_scalar(Cx w, double tau, double shift = 0.0);
Cx probe_dtau_scalar(Cx w, double tau, double shift = 0.0);

// Field values.
CxVec2 probe_field(double y1, double y2, const ProbePoint& p, double shift = 0.0);
CxVec2 probe_dtau_field(double y1, double y2, const ProbePoint& p, double shift = 0.0);

// Tractions on a line with outward unit normal nu.
CxVec2 probe_traction(double y1, double y2, const ProbePoint& p, const Material& mat,
                      Vec2 nu, double shift = 0.0);
CxVec2 probe_dtau_traction(double y1, double y2, const ProbePoint& p, const Material& mat,
                           Vec2 nu, double shift = 0.0);

// Scalar traction factors: traction = factor * (e1 + i e2).
Cx probe_traction_scalar(Cx w, double tau, const Material& mat, Vec2 nu, double shift = 0.0);
Cx probe_dtau_traction_scalar(Cx w, double tau, const Material& mat, Vec2 nu, double shift = 0.0);

// Real part of the weighted exponent rate, Re(-i/w) - 1/(2s), evaluated in
// the cancellation-free circle form
//     -(|y - (x - s e2)|^2 - s^2) / (2 s |y - x|^2) :
// zero exactly on the circle of radius s below x, positive inside, negative
// outside.  Multiplying by tau gives log |e^{-tau/(2s)} V| - log sqrt(2).
double weighted_exponent_rate(double y1, double y2, const ProbePoint& p, double s);

// Five-point finite-difference residual of the Navier system and of the
// divergence at one evaluation point, with the scale of the individual
// operator terms for relative assessment.  `reliable` is false when the
// stencil sits too close to the probe singularity (h not small against the
// distance) for the differences to mean anything.
struct NavierResidual {
    double navier = 0.0;     // max component modulus of mu Lap V + (lambda+mu) grad div V
    double divergence = 0.0; // modulus of div V
    double term_scale = 0.0; // sum of the second-difference term magnitudes before
                             // they cancel (the operator output is analytically zero,
                             // so the residual must be compared against its inputs)
    double div_scale = 0.0;  // same for the two first differences of the divergence
    bool reliable = true;
};

NavierResidual verify_navier_at(double y1, double y2, const ProbePoint& p, const Material& mat,
                                double h);

}  // namespace weldcrack
