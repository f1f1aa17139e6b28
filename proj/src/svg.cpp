#include "weldcrack/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace weldcrack {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string render_overview(const PlateGeometry& geom, const CrackConfig& cracks,
                            const std::vector<double>& probes,
                            const std::vector<TipEstimate>& tips) {
    // World coordinates: x right, y up; rendered with y flipped so the
    // observation line sits on top.  ymax is the observation ordinate.
    const double ymax = geom.probe_y2();
    const auto Y = [ymax](double y) { return ymax - y; };
    const double margin = 0.08 * std::max(geom.a, ymax);
    const double marker = 0.015 * geom.a;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(-margin) + " " +
         num(-margin) + " " + num(geom.a + 2.0 * margin) + " " + num(ymax + 2.0 * margin) +
         "\">\n";

    s += "  <rect class=\"domain\" x=\"0\" y=\"" + num(Y(geom.b)) + "\" width=\"" + num(geom.a) +
         "\" height=\"" + num(geom.b) +
         "\" fill=\"#f4f1ea\" stroke=\"#444444\" stroke-width=\"" + num(0.004 * geom.a) +
         "\"/>\n";

    s += "  <line class=\"junction\" x1=\"0\" y1=\"" + num(Y(geom.c)) + "\" x2=\"" + num(geom.a) +
         "\" y2=\"" + num(Y(geom.c)) +
         "\" stroke=\"#bbaa88\" stroke-width=\"" + num(0.004 * geom.a) +
         "\" stroke-dasharray=\"" + num(0.02 * geom.a) + " " + num(0.02 * geom.a) + "\"/>\n";

    for (int k = 0; k < cracks.crack_count(); ++k) {
        s += "  <line class=\"crack\" x1=\"" + num(cracks.tips[2 * k]) + "\" y1=\"" +
             num(Y(geom.c)) + "\" x2=\"" + num(cracks.tips[2 * k + 1]) + "\" y2=\"" +
             num(Y(geom.c)) + "\" stroke=\"#a02020\" stroke-width=\"" + num(0.008 * geom.a) +
             "\"/>\n";
    }

    for (const double x : probes) {
        s += "  <circle class=\"probe\" cx=\"" + num(x) + "\" cy=\"" + num(Y(ymax)) + "\" r=\"" +
             num(marker) + "\" fill=\"#2050a0\"/>\n";
    }

    for (const auto& tip : tips) {
        if (!tip.ok) continue;
        s += "  <circle class=\"disc\" cx=\"" + num(tip.x1) + "\" cy=\"" +
             num(Y(ymax - tip.s_hat)) + "\" r=\"" + num(tip.s_hat) +
             "\" fill=\"none\" stroke=\"#2050a0\" stroke-width=\"" + num(0.003 * geom.a) +
             "\" stroke-dasharray=\"" + num(0.01 * geom.a) + " " + num(0.01 * geom.a) + "\"/>\n";
        const double cx = tip.c_hat, cy = Y(geom.c), m = 1.6 * marker;
        s += "  <path class=\"tip\" d=\"M " + num(cx - m) + " " + num(cy - m) + " L " +
             num(cx + m) + " " + num(cy + m) + " M " + num(cx - m) + " " + num(cy + m) + " L " +
             num(cx + m) + " " + num(cy - m) +
             "\" stroke=\"#107030\" stroke-width=\"" + num(0.006 * geom.a) +
             "\" fill=\"none\"/>\n";
    }

    s += "</svg>\n";
    return s;
}

}  // namespace weldcrack
