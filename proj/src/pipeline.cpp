#include "weldcrack/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "weldcrack/csvio.hpp"
#include "weldcrack/extraction.hpp"
#include "weldcrack/fem.hpp"
#include "weldcrack/indicator.hpp"
#include "weldcrack/svg.hpp"

namespace weldcrack {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Trace rows are sampled at the five Gauss abscissae per quadratic boundary
// edge; any three of them pin the quadratic down again on read-back.
constexpr std::array<double, 5> kG5x = {0.046910077030668004, 0.230765344947158450, 0.5,
                                        0.769234655052841550, 0.953089922969331996};

const std::vector<std::string> kTraceHeader = {"side", "arclen", "y1", "y2",
                                               "u1",   "u2",     "g1", "g2"};
const std::vector<std::string> kCurveHeader = {"tau",        "weight_s",   "Re_I",
                                               "Im_I",       "Re_Iprime",  "Im_Iprime",
                                               "err_estimate"};
const std::vector<std::string> kCapsHeader = {"x1", "tau_cap"};
const std::vector<std::string> kJumpHeader = {"x_lo",   "x_hi",   "j1_lo", "j2_lo", "j1_mid",
                                              "j2_mid", "j1_hi",  "j2_hi", "anchor"};
const std::vector<std::string> kExtractionHeader = {
    "x1", "s_hat", "parity", "alpha_hat", "c_hat", "confidence", "window_lo", "window_hi", "r2"};
const std::vector<std::string> kScanHeader = {"x1", "verdict", "p_hat", "q_hat", "score"};

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::string curve_name(size_t idx) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "curve_%03zu.csv", idx);
    return buf;
}

Side side_from_name(const std::string& name) {
    for (const Side s : {Side::bottom, Side::right, Side::top, Side::left})
        if (name == side_name(s)) return s;
    throw std::runtime_error("trace file names unknown side '" + name + "'");
}

// Run body(0..n-1) on up to `threads` workers; results must go to
// index-addressed slots so scheduling cannot influence the output.
void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ----------------------------------------------------------------------------
// Trace and jump round-trips
// ----------------------------------------------------------------------------

std::string trace_to_csv(const BoundaryTrace& trace, const BoundaryLoad& load,
                         const PlateGeometry& geom) {
    CsvTable t;
    t.header = kTraceHeader;
    for (const auto& edge : trace.edges) {
        for (const double xi : kG5x) {
            const double coord = edge.lo + (edge.hi - edge.lo) * xi;
            const Vec2 p = boundary_point(geom, edge.side, coord);
            const Vec2 u = trace_edge_eval(edge, xi);
            const Vec2 g = load.eval(edge.side, coord);
            t.rows.push_back({side_name(edge.side), format_g17(trace_arclength(geom, edge.side, coord)),
                              format_g17(p.x), format_g17(p.y), format_g17(u.x), format_g17(u.y),
                              format_g17(g.x), format_g17(g.y)});
        }
    }
    return render_csv(t);
}

BoundaryTrace trace_from_csv(const CsvTable& table, const std::string& path) {
    require_csv_header(table, kTraceHeader, path);
    if (table.rows.empty() || table.rows.size() % kG5x.size() != 0)
        throw std::runtime_error("trace file '" + path + "' must hold 5 rows per boundary edge");

    BoundaryTrace trace;
    const double dxi = kG5x[4] - kG5x[0];
    const double delta = 0.5 - kG5x[0];  // half-spread of the outer sample pair
    for (size_t base = 0; base < table.rows.size(); base += 5) {
        const auto& r0 = table.rows[base];
        const auto& r2 = table.rows[base + 2];
        const auto& r4 = table.rows[base + 4];
        TraceEdge e;
        e.side = side_from_name(r0[0]);
        for (size_t k = 1; k < 5; ++k)
            if (table.rows[base + k][0] != r0[0])
                throw std::runtime_error("trace file '" + path + "' mixes sides within an edge");

        const bool horizontal = e.side == Side::bottom || e.side == Side::top;
        const size_t ci = horizontal ? 2 : 3;  // running coordinate column (y1 or y2)
        const double c0 = parse_csv_num(r0[ci]);
        const double c4 = parse_csv_num(r4[ci]);
        const double len = (c4 - c0) / dxi;
        e.lo = c0 - len * kG5x[0];
        e.hi = e.lo + len;
        if (!(e.hi > e.lo))
            throw std::runtime_error("trace file '" + path + "' has a degenerate edge");

        // Quadratic through the symmetric samples p (xi0), m (1/2), q (xi4).
        for (int comp = 0; comp < 2; ++comp) {
            const size_t col = 4 + static_cast<size_t>(comp);
            const double p = parse_csv_num(r0[col]);
            const double m = parse_csv_num(r2[col]);
            const double q = parse_csv_num(r4[col]);
            const double lin = (q - p) / (2.0 * delta);
            const double quad = (p + q - 2.0 * m) / (2.0 * delta * delta);
            const double at0 = m - 0.5 * lin + 0.25 * quad;
            const double at1 = m + 0.5 * lin + 0.25 * quad;
            if (comp == 0) {
                e.u[0].x = at0;
                e.u[1].x = m;  // the middle sample sits at xi = 1/2 already
                e.u[2].x = at1;
            } else {
                e.u[0].y = at0;
                e.u[1].y = m;
                e.u[2].y = at1;
            }
        }
        trace.edges.push_back(e);
    }
    return trace;
}

std::string jump_to_csv(const JumpOnSigma& jump) {
    CsvTable t;
    t.header = kJumpHeader;
    for (const auto& piece : jump.pieces) {
        const Vec2 lo = piece.value(piece.lo);
        const Vec2 mid = piece.value(0.5 * (piece.lo + piece.hi));
        const Vec2 hi = piece.value(piece.hi);
        t.rows.push_back({format_g17(piece.lo), format_g17(piece.hi), format_g17(lo.x),
                          format_g17(lo.y), format_g17(mid.x), format_g17(mid.y),
                          format_g17(hi.x), format_g17(hi.y), format_g17(piece.sqrt_anchor)});
    }
    return render_csv(t);
}

JumpOnSigma jump_from_csv(const CsvTable& table, const std::string& path) {
    require_csv_header(table, kJumpHeader, path);
    JumpOnSigma jump;
    for (const auto& row : table.rows) {
        JumpPiece piece;
        piece.lo = parse_csv_num(row[0]);
        piece.hi = parse_csv_num(row[1]);
        const Vec2 vlo{parse_csv_num(row[2]), parse_csv_num(row[3])};
        const Vec2 vmid{parse_csv_num(row[4]), parse_csv_num(row[5])};
        const Vec2 vhi{parse_csv_num(row[6]), parse_csv_num(row[7])};
        const std::string& anchor = row[8];
        if (anchor != "nan") piece.sqrt_anchor = parse_csv_num(anchor);
        const double lo = piece.lo, hi = piece.hi;
        piece.value = [vlo, vmid, vhi, lo, hi](double y1) {
            const double t = (y1 - lo) / (hi - lo);
            const double n0 = (1.0 - t) * (1.0 - 2.0 * t);
            const double n1 = 4.0 * t * (1.0 - t);
            const double n2 = t * (2.0 * t - 1.0);
            return Vec2{n0 * vlo.x + n1 * vmid.x + n2 * vhi.x,
                        n0 * vlo.y + n1 * vmid.y + n2 * vhi.y};
        };
        jump.pieces.push_back(std::move(piece));
    }
    return jump;
}

// ----------------------------------------------------------------------------
// Curve round-trips
// ----------------------------------------------------------------------------

std::string curve_to_csv(const IndicatorCurve& curve) {
    CsvTable t;
    t.header = kCurveHeader;
    for (const auto& s : curve.samples)
        t.rows.push_back({format_g17(s.tau), format_g17(curve.weight_s), format_g17(s.I.real()),
                          format_g17(s.I.imag()), format_g17(s.Iprime.real()),
                          format_g17(s.Iprime.imag()), format_g17(s.err)});
    return render_csv(t);
}

IndicatorCurve curve_from_file(const std::string& path, double x1, const PlateGeometry& geom) {
    const CsvTable table = read_csv_file(path);
    require_csv_header(table, kCurveHeader, path);
    if (table.rows.empty()) throw std::runtime_error("curve file '" + path + "' has no samples");
    std::vector<IndicatorSample> samples;
    double weight = 0.0;
    for (const auto& row : table.rows) {
        IndicatorSample s;
        s.tau = parse_csv_num(row[0]);
        const double w = parse_csv_num(row[1]);
        if (samples.empty())
            weight = w;
        else if (w != weight)
            throw std::runtime_error("curve file '" + path + "' mixes weight radii");
        s.I = Cx{parse_csv_num(row[2]), parse_csv_num(row[3])};
        s.Iprime = Cx{parse_csv_num(row[4]), parse_csv_num(row[5])};
        s.err = parse_csv_num(row[6]);
        samples.push_back(s);
    }
    return assemble_curve(x1, geom.probe_y2(), weight, IndicatorRoute::boundary,
                          std::move(samples));
}

// Reads every per-probe curve for the configured probe list.
std::vector<IndicatorCurve> read_all_curves(const RunConfig& cfg, const std::string& out_dir) {
    const std::vector<double> probes = cfg.probes();
    std::vector<IndicatorCurve> curves;
    curves.reserve(probes.size());
    for (size_t i = 0; i < probes.size(); ++i)
        curves.push_back(curve_from_file(join_path(out_dir, curve_name(i)), probes[i], cfg.geom));
    return curves;
}

// Truncates a curve to tau <= cap (used with the measured-data route caps).
IndicatorCurve cap_curve(const IndicatorCurve& curve, double cap) {
    std::vector<IndicatorSample> kept;
    for (const auto& s : curve.samples)
        if (s.tau <= cap) kept.push_back(s);
    return assemble_curve(curve.x1, curve.x2, curve.weight_s, curve.route, std::move(kept));
}

JumpOnSigma oracle_jump(const RunConfig& cfg) {
    if (cfg.series.empty())
        throw std::invalid_argument(
            "oracle curves need an [oracle] section with at least one series line");
    JumpOnSigma jump;
    for (const auto& sc : cfg.series)
        jump = JumpOnSigma::superpose(jump, make_windowed_jump(sc, cfg.geom, cfg.cracks, cfg.mat));
    return jump;
}

std::string file_checksum(const std::string& path) {
    return hash_hex(fnv1a64(read_text_file(path)));
}

}  // namespace

// ----------------------------------------------------------------------------
// forward
// ----------------------------------------------------------------------------

std::vector<std::string> cmd_forward(const RunConfig& cfg, const std::string& out_dir) {
    const Mesh mesh = build_mesh(cfg.geom, cfg.cracks, cfg.load, cfg.mesh_opt);
    const FemSolution sol = assemble_and_solve(mesh, cfg.load, cfg.mat);

    const std::string trace_path = join_path(out_dir, "trace.csv");
    const std::string jump_path = join_path(out_dir, "jump.csv");
    atomic_write_text(trace_path, trace_to_csv(sol.trace, cfg.load, cfg.geom));
    atomic_write_text(jump_path, jump_to_csv(fem_jump(mesh, sol)));
    return {trace_path, jump_path};
}

// ----------------------------------------------------------------------------
// indicate
// ----------------------------------------------------------------------------

std::vector<std::string> cmd_indicate(const RunConfig& cfg, const std::string& out_dir,
                                      bool use_oracle, int threads) {
    const std::vector<double> taus = cfg.tau_grid();
    const double weight = cfg.weight_s();
    const std::vector<double> probes = cfg.probes();
    const int n = static_cast<int>(probes.size());

    std::vector<IndicatorCurve> curves(probes.size());
    std::vector<std::string> files;

    if (use_oracle) {
        const JumpOnSigma jump = oracle_jump(cfg);
        parallel_for(n, threads, [&](int i) {
            curves[static_cast<size_t>(i)] = indicator_from_jump(
                jump, probes[static_cast<size_t>(i)], taus, weight, cfg.geom, cfg.mat);
        });
    } else {
        const std::string trace_path = join_path(out_dir, "trace.csv");
        if (!fs::exists(trace_path))
            throw std::runtime_error("missing trace file '" + trace_path +
                                     "'; run the forward stage first");
        const BoundaryTrace trace = trace_from_csv(read_csv_file(trace_path), trace_path);

        const std::string jump_path = join_path(out_dir, "jump.csv");
        if (!fs::exists(jump_path))
            throw std::runtime_error("missing crack-opening file '" + jump_path +
                                     "'; run the forward stage first");
        const JumpOnSigma jump = jump_from_csv(read_csv_file(jump_path), jump_path);

        std::vector<IndicatorCurve> sigma(probes.size());
        parallel_for(n, threads, [&](int i) {
            const size_t k = static_cast<size_t>(i);
            curves[k] =
                indicator_from_trace(trace, cfg.load, probes[k], taus, weight, cfg.geom, cfg.mat);
            sigma[k] = indicator_from_jump(jump, probes[k], taus, weight, cfg.geom, cfg.mat);
        });

        // Route-disagreement caps: discretization noise in the boundary data
        // is amplified exponentially in tau, and the tau where the two
        // independent routes drift apart is the honest end of the usable
        // window for downstream fits.
        CsvTable caps;
        caps.header = kCapsHeader;
        for (size_t k = 0; k < probes.size(); ++k) {
            double cap = std::numeric_limits<double>::infinity();
            for (size_t j = 0; j < taus.size(); ++j) {
                const IndicatorSample& b = curves[k].samples[j];
                const IndicatorSample& s = sigma[k].samples[j];
                const double ref = std::abs(s.I);
                const bool broken =
                    !b.finite() || !s.finite() || !(ref > 0.0) || std::abs(b.I - s.I) > 0.10 * ref;
                if (broken) {
                    cap = j == 0 ? 0.0 : taus[j - 1];
                    break;
                }
            }
            caps.rows.push_back({format_g17(probes[k]), format_g17(cap)});
        }
        const std::string caps_path = join_path(out_dir, "caps.csv");
        atomic_write_text(caps_path, render_csv(caps));
        files.push_back(caps_path);
    }

    for (size_t k = 0; k < probes.size(); ++k) {
        const std::string path = join_path(out_dir, curve_name(k));
        atomic_write_text(path, curve_to_csv(curves[k]));
        files.push_back(path);
    }
    return files;
}

// ----------------------------------------------------------------------------
// extract
// ----------------------------------------------------------------------------

std::vector<std::string> cmd_extract(const RunConfig& cfg, const std::string& out_dir) {
    const std::vector<double> probes = cfg.probes();
    std::vector<IndicatorCurve> curves = read_all_curves(cfg, out_dir);

    // Apply measured-data caps when the indicate stage produced them.
    const std::string caps_path = join_path(out_dir, "caps.csv");
    if (fs::exists(caps_path)) {
        const CsvTable caps = read_csv_file(caps_path);
        require_csv_header(caps, kCapsHeader, caps_path);
        if (caps.rows.size() != curves.size())
            throw std::runtime_error("caps file '" + caps_path +
                                     "' does not match the probe list");
        for (size_t k = 0; k < curves.size(); ++k)
            curves[k] = cap_curve(curves[k], parse_csv_num(caps.rows[k][1]));
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    CsvTable out;
    out.header = kExtractionHeader;
    std::vector<TipEstimate> tips;
    tips.reserve(curves.size());
    for (const auto& curve : curves) {
        const TipEstimate tip = recover_tip(curve, cfg.geom);
        tips.push_back(tip);
        if (tip.ok)
            out.rows.push_back({format_g17(tip.x1), format_g17(tip.s_hat),
                                parity_name(tip.parity), format_g17(tip.alpha_hat),
                                format_g17(tip.c_hat), confidence_name(tip.confidence),
                                format_g17(tip.fit.window_lo), format_g17(tip.fit.window_hi),
                                format_g17(tip.fit.r2)});
        else
            out.rows.push_back({format_g17(tip.x1), format_g17(nan),
                                parity_name(TipParity::indeterminate), format_g17(nan),
                                format_g17(nan), confidence_name(Confidence::low),
                                format_g17(nan), format_g17(nan), format_g17(nan)});
    }

    const std::string extraction_path = join_path(out_dir, "extraction.csv");
    atomic_write_text(extraction_path, render_csv(out));
    std::vector<std::string> files{extraction_path};

    if (cfg.write_svg) {
        const std::string svg_path = join_path(out_dir, "overview.svg");
        atomic_write_text(svg_path, render_overview(cfg.geom, cfg.cracks, probes, tips));
        files.push_back(svg_path);
    }
    return files;
}

// ----------------------------------------------------------------------------
// scan
// ----------------------------------------------------------------------------

std::vector<std::string> cmd_scan(const RunConfig& cfg, const std::string& out_dir) {
    const std::vector<double> probes = cfg.probes();
    std::vector<IndicatorCurve> curves = read_all_curves(cfg, out_dir);

    // The scan's model dichotomy holds at the fixed radius of the disc that
    // touches the junction line itself; re-weight exactly if the curves were
    // stored with any other radius.
    const double s_tilde = cfg.geom.scan_radius();
    for (auto& c : curves)
        if (c.weight_s != s_tilde) c = reweight_curve(c, s_tilde);

    const std::vector<ScanPoint> points = scan_fixed_radius(curves, s_tilde);

    CsvTable out;
    out.header = kScanHeader;
    std::vector<TipEstimate> marks;
    for (const auto& p : points) {
        out.rows.push_back({format_g17(p.x1), verdict_name(p.verdict), format_g17(p.p_hat),
                            format_g17(p.q_hat), format_g17(p.score)});
        if (p.verdict == ScanVerdict::tip) {
            TipEstimate mark;
            mark.ok = true;
            mark.x1 = p.x1;
            mark.s_hat = s_tilde;
            mark.c_hat = p.x1;
            marks.push_back(mark);
        }
    }

    const std::string scan_path = join_path(out_dir, "scan.csv");
    atomic_write_text(scan_path, render_csv(out));
    std::vector<std::string> files{scan_path};

    if (cfg.write_svg) {
        const std::string svg_path = join_path(out_dir, "scan.svg");
        atomic_write_text(svg_path, render_overview(cfg.geom, cfg.cracks, probes, marks));
        files.push_back(svg_path);
    }
    return files;
}

// ----------------------------------------------------------------------------
// pipeline
// ----------------------------------------------------------------------------

std::vector<std::string> cmd_pipeline(const RunConfig& cfg, const std::string& out_dir,
                                      bool use_oracle, int threads, long seed) {
    using clock = std::chrono::steady_clock;
    const std::string cache_path = join_path(out_dir, "cache.json");

    json cache = json::object();
    if (fs::exists(cache_path)) {
        try {
            cache = json::parse(read_text_file(cache_path));
        } catch (const std::exception&) {
            cache = json::object();  // stale or foreign cache: recompute everything
        }
    }

    json stages = json::array();
    std::vector<std::string> files;
    const auto run_stage = [&](const std::string& name, const std::string& hash,
                               const std::vector<std::string>& products,
                               const std::function<std::vector<std::string>()>& body) {
        const bool have_all = std::all_of(products.begin(), products.end(), [&](const auto& p) {
            return fs::exists(join_path(out_dir, p));
        });
        const bool cached = !hash.empty() && cache.contains(name) && cache[name] == hash &&
                            have_all;
        const auto t0 = clock::now();
        if (cached) {
            for (const auto& p : products) files.push_back(join_path(out_dir, p));
        } else {
            const auto written = body();
            files.insert(files.end(), written.begin(), written.end());
            if (!hash.empty()) {
                cache[name] = hash;
                atomic_write_text(cache_path, cache.dump(2) + "\n");
            }
        }
        const double seconds =
            std::chrono::duration_cast<std::chrono::duration<double>>(clock::now() - t0).count();
        stages.push_back({{"name", name}, {"seconds", seconds}, {"cached", cached}});
    };

    if (!use_oracle) {
        const std::string fwd_hash =
            sections_hash(cfg, {"geometry", "cracks", "material", "load", "solver"});
        run_stage("forward", fwd_hash, {"trace.csv", "jump.csv"},
                  [&] { return cmd_forward(cfg, out_dir); });
    }

    {
        std::string ind_hash = sections_hash(
            cfg, {"geometry", "cracks", "material", "load", "solver", "indicator", "probes",
                  "oracle"});
        ind_hash += use_oracle ? "-oracle" : "-trace";
        std::vector<std::string> products;
        for (size_t k = 0; k < cfg.probes().size(); ++k) products.push_back(curve_name(k));
        if (!use_oracle) products.push_back("caps.csv");
        run_stage("indicate", ind_hash, products,
                  [&] { return cmd_indicate(cfg, out_dir, use_oracle, threads); });
    }

    run_stage("extract", "", {}, [&] { return cmd_extract(cfg, out_dir); });
    run_stage("scan", "", {}, [&] { return cmd_scan(cfg, out_dir); });

    files.push_back(cache_path);

    json manifest;
    manifest["version"] = kArtifactVersion;
    manifest["config_hash"] = sections_hash(
        cfg, {"geometry", "cracks", "material", "load", "solver", "indicator", "probes", "oracle",
              "output"});
    manifest["seed"] = seed;
    manifest["stages"] = stages;
    json inventory = json::array();
    std::vector<std::string> unique_files = files;
    std::sort(unique_files.begin(), unique_files.end());
    unique_files.erase(std::unique(unique_files.begin(), unique_files.end()),
                       unique_files.end());
    for (const auto& path : unique_files)
        inventory.push_back(
            {{"path", fs::path(path).filename().string()}, {"fnv1a64", file_checksum(path)}});
    manifest["files"] = inventory;

    const std::string manifest_path = join_path(out_dir, "manifest.json");
    atomic_write_text(manifest_path, manifest.dump(2) + "\n");
    files.push_back(manifest_path);
    return files;
}

}  // namespace weldcrack
