#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "weldcrack/geometry.hpp"
#include "weldcrack/loads.hpp"
#include "weldcrack/material.hpp"
#include "weldcrack/mesh.hpp"
#include "weldcrack/oracle.hpp"

namespace weldcrack {

// ============================================================================
// Run configuration
// ============================================================================
//
// A run is described by one human-editable text file in a key-table format:
// `[section]` headers followed by `key = value` lines, `#` starting a
// comment.  Parsing is strict — unknown sections, unknown keys, duplicate
// keys (except the repeatable ones noted below), malformed numbers, and
// missing required entries are all hard errors — because the file doubles as
// the experiment record and silent tolerance would undermine reproducibility.
//
// Sections and keys:
//   [geometry]   a, b, c, eps
//   [cracks]     tips = x0 x1 ... (even count, 0 and a included) or `none`
//   [material]   lambda, mu
//   [load]       preset = tension | oblique | inline;
//                beta, gamma for the two presets;
//                repeatable `patch = side lo hi tx ty` lines for inline
//   [solver]     h, grading
//   [indicator]  tau_lo, tau_count, tau_ratio, weight (`auto` or a radius)
//   [probes]     x1 = list   — or —   scan_lo, scan_hi, scan_count
//   [oracle]     repeatable `series = tip_index eta A1 B1 [A2 B2 ...]`
//   [output]     dir, svg = true | false
//
// The oracle section is optional (required only by the synthetic-data
// commands); everything else must be present.  Each section's canonical
// text is kept verbatim so pipeline stages can be keyed by content hashes.

struct RunConfig {
    PlateGeometry geom;
    CrackConfig cracks;
    Material mat;
    BoundaryLoad load;
    MeshOptions mesh_opt;

    double tau_lo = 0.0;
    int tau_count = 0;
    double tau_ratio = 0.0;
    bool weight_auto = true;
    double weight_value = 0.0;  // used when weight_auto is false

    std::vector<double> probe_x1;  // explicit probe list (empty when scanning)
    bool scan_mode = false;
    double scan_lo = 0.0, scan_hi = 0.0;
    int scan_count = 0;

    std::vector<SeriesCoefficients> series;  // empty unless [oracle] present

    std::string out_dir = "out";
    bool write_svg = true;

    // Canonical `key = value` text per section, for cache hashing.
    std::map<std::string, std::string> canonical;

    // Resolved probe abscissae: the explicit list, or the scan grid.
    std::vector<double> probes() const;
    // Weighting radius: the fixed value, or the scan radius when `auto`.
    double weight_s() const;
    // Strictly increasing geometric grid; insists on >= 8 points because the
    // extraction tail fits cannot work with fewer.
    std::vector<double> tau_grid() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);  // throws with the path on failure

// 64-bit FNV-1a over bytes; the pipeline's checksum and cache key primitive.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hash_hex(std::uint64_t h);

// Hash of the named sections' canonical text (sections absent from the
// config contribute nothing); stage caches compare these.
std::string sections_hash(const RunConfig& cfg, const std::vector<std::string>& sections);

}  // namespace weldcrack
