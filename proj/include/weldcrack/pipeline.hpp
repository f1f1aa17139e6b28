#pragma once

#include <string>
#include <vector>

#include "weldcrack/config.hpp"

namespace weldcrack {

// ============================================================================
// Batch pipeline
// ============================================================================
//
// Stage commands, one per CLI subcommand.  Each stage reads its inputs from
// and writes its outputs into `out_dir` as CSV/SVG files, so any stage can be
// rerun, inspected, or replaced in isolation:
//
//   forward   -> trace.csv (boundary data), jump.csv (crack-opening dump)
//   indicate  -> curve_###.csv per probe; with measured (FEM) data also
//                caps.csv, the per-probe tau cutoffs where the boundary and
//                crack-opening indicator routes drift more than 10% apart
//   extract   -> extraction.csv (+ overview.svg)
//   scan      -> scan.csv (+ scan.svg)
//   pipeline  -> all of the above in order, then manifest.json
//
// Outputs are deterministic byte-for-byte for a fixed config; the full
// pipeline caches the expensive stages by section-content hash (stored in
// cache.json) and writes its manifest last so an interrupted run leaves no
// manifest behind.  All commands throw on failure; the CLI maps exceptions
// to nonzero exit codes.

inline constexpr const char* kArtifactVersion = "0.1.0";

std::vector<std::string> cmd_forward(const RunConfig& cfg, const std::string& out_dir);

// use_oracle synthesizes curves from the [oracle] series jumps instead of
// reading trace.csv; threads parallelize over probes (outputs independent of
// the thread count).
std::vector<std::string> cmd_indicate(const RunConfig& cfg, const std::string& out_dir,
                                      bool use_oracle, int threads);

std::vector<std::string> cmd_extract(const RunConfig& cfg, const std::string& out_dir);

std::vector<std::string> cmd_scan(const RunConfig& cfg, const std::string& out_dir);

// The seed is recorded in the manifest for provenance only; no pipeline
// stage draws random numbers.
std::vector<std::string> cmd_pipeline(const RunConfig& cfg, const std::string& out_dir,
                                      bool use_oracle, int threads, long seed);

}  // namespace weldcrack
