#pragma once

#include <string>
#include <vector>

#include "weldcrack/extraction.hpp"
#include "weldcrack/geometry.hpp"

namespace weldcrack {

// ============================================================================
// Result plot
// ============================================================================
//
// A single self-contained SVG: the specimen rectangle, the junction line,
// the configured cracks (when known), the probe points on the observation
// line, and per successful extraction the recovered tangent disc (center
// x - s_hat e2, radius s_hat) with a cross marker at the recovered tip
// abscissa.  Every entity carries a class attribute (domain, junction,
// crack, probe, disc, tip) so plots can be checked by counting.

std::string render_overview(const PlateGeometry& geom, const CrackConfig& cracks,
                            const std::vector<double>& probes,
                            const std::vector<TipEstimate>& tips);

}  // namespace weldcrack
