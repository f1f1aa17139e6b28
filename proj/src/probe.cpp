#include "weldcrack/probe.hpp"

#include <cmath>
#include <stdexcept>

namespace weldcrack {

namespace {

constexpr Cx kI{0.0, 1.0};

void require_off_pole(Cx w) {
    if (w == Cx(0.0, 0.0))
        throw std::invalid_argument("probe field evaluated at its singular point");
}

}  // namespace

Cx probe_scalar(Cx w, double tau, double shift) {
    require_off_pole(w);
    return std::exp(-kI * tau / w - shift);
}

Cx probe_dtau_scalar(Cx w, double tau, double shift) {
    require_off_pole(w);
    return (-kI / w) * std::exp(-kI * tau / w - shift);
}

CxVec2 probe_field(double y1, double y2, const ProbePoint& p, double shift) {
    const Cx f = probe_scalar(probe_w(y1, y2, p), p.tau, shift);
    return {f, kI * f};
}

CxVec2 probe_dtau_field(double y1, double y2, const ProbePoint& p, double shift) {
    const Cx f = probe_dtau_scalar(probe_w(y1, y2, p), p.tau, shift);
    return {f, kI * f};
}

Cx probe_traction_scalar(Cx w, double tau, const Material& mat, Vec2 nu, double shift) {
    require_off_pole(w);
    // stress-function derivative of exp(-i tau / w) is (i tau / w^2) exp(-i tau / w)
    const Cx dP = kI * tau / (w * w) * std::exp(-kI * tau / w - shift);
    return 2.0 * mat.mu * dP * Cx(nu.x, nu.y);
}

Cx probe_dtau_traction_scalar(Cx w, double tau, const Material& mat, Vec2 nu, double shift) {
    require_off_pole(w);
    // derivative of (-i/w) exp(-i tau / w) is (i/w^2)(1 - i tau / w) exp(-i tau / w)
    const Cx dP = kI / (w * w) * (1.0 - kI * tau / w) * std::exp(-kI * tau / w - shift);
    return 2.0 * mat.mu * dP * Cx(nu.x, nu.y);
}

CxVec2 probe_traction(double y1, double y2, const ProbePoint& p, const Material& mat,
                      Vec2 nu, double shift) {
    const Cx f = probe_traction_scalar(probe_w(y1, y2, p), p.tau, mat, nu, shift);
    return {f, kI * f};
}

CxVec2 probe_dtau_traction(double y1, double y2, const ProbePoint& p, const Material& mat,
                           Vec2 nu, double shift) {
    const Cx f = probe_dtau_traction_scalar(probe_w(y1, y2, p), p.tau, mat, nu, shift);
    return {f, kI * f};
}

double weighted_exponent_rate(double y1, double y2, const ProbePoint& p, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("weighted_exponent_rate: radius must be positive");
    const double dx = y1 - p.x1;
    const double dy = y2 - p.x2;
    const double r2 = dx * dx + dy * dy;
    if (r2 == 0.0) throw std::invalid_argument("weighted_exponent_rate: probe singularity");
    // |y - (x - s e2)| relative to s, factored to avoid cancellation when the
    // point sits near the circle.
    const double rc = std::hypot(dx, dy + s);
    return -((rc - s) * (rc + s)) / (2.0 * s * r2);
}

NavierResidual verify_navier_at(double y1, double y2, const ProbePoint& p, const Material& mat,
                                double h) {
    NavierResidual out;
    const double dist = std::hypot(y1 - p.x1, y2 - p.x2);
    out.reliable = dist > 4.0 * h;

    // second differences of both components on the 3x3 stencil
    auto val = [&](double a, double b) { return probe_field(a, b, p); };
    const CxVec2 C = val(y1, y2);
    const CxVec2 E = val(y1 + h, y2), W = val(y1 - h, y2);
    const CxVec2 N = val(y1, y2 + h), S = val(y1, y2 - h);
    const CxVec2 NE = val(y1 + h, y2 + h), NW = val(y1 - h, y2 + h);
    const CxVec2 SE = val(y1 + h, y2 - h), SW = val(y1 - h, y2 - h);

    const double ih2 = 1.0 / (h * h);
    auto second = [&](Cx em, Cx ec, Cx ep) { return (ep - 2.0 * ec + em) * ih2; };
    const Cx d11_a = second(W.a, C.a, E.a), d11_b = second(W.b, C.b, E.b);
    const Cx d22_a = second(S.a, C.a, N.a), d22_b = second(S.b, C.b, N.b);
    const Cx d12_a = (NE.a - NW.a - SE.a + SW.a) * (0.25 * ih2);
    const Cx d12_b = (NE.b - NW.b - SE.b + SW.b) * (0.25 * ih2);

    const Cx lap_a = d11_a + d22_a, lap_b = d11_b + d22_b;
    // grad div V = (d11 V1 + d12 V2, d12 V1 + d22 V2)
    const Cx gd_a = d11_a + d12_b, gd_b = d12_a + d22_b;

    const double lm = mat.lambda + mat.mu;
    const Cx res_a = mat.mu * lap_a + lm * gd_a;
    const Cx res_b = mat.mu * lap_b + lm * gd_b;
    out.navier = std::max(std::abs(res_a), std::abs(res_b));

    const Cx div = (E.a - W.a) / (2.0 * h) + (N.b - S.b) / (2.0 * h);
    out.divergence = std::abs(div);

    double maxv = 0.0;
    for (const CxVec2* v : {&C, &E, &W, &N, &S, &NE, &NW, &SE, &SW})
        maxv = std::max(maxv, std::max(std::abs(v->a), std::abs(v->b)));
    // The operator output vanishes identically for the probe field, so the
    // honest reference is the size of the pieces that cancel, floored at the
    // rounding level of one second difference.
    const double term = mat.mu * (std::abs(d11_a) + std::abs(d22_a) + std::abs(d11_b) +
                                  std::abs(d22_b)) +
                        lm * (std::abs(d11_a) + std::abs(d12_b) + std::abs(d12_a) +
                              std::abs(d22_b));
    const double floor_scale =
        (std::abs(mat.lambda) + 2.0 * mat.mu) * maxv * ih2 * 16.0 * 2.220446049250313e-16;
    out.term_scale = std::max(term, floor_scale);
    out.div_scale = std::max((std::abs(E.a - W.a) + std::abs(N.b - S.b)) / (2.0 * h),
                             maxv / h * 4.0 * 2.220446049250313e-16);
    return out;
}

}  // namespace weldcrack
