#include "weldcrack/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "weldcrack/indicator.hpp"

namespace weldcrack {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, const std::string& where) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + tok.size() || tok.empty()) fail(where + ": '" + tok + "' is not a number");
    return v;
}

long parse_int(const std::string& tok, const std::string& where) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end != begin + tok.size() || tok.empty()) fail(where + ": '" + tok + "' is not an integer");
    return v;
}

bool parse_bool(const std::string& tok, const std::string& where) {
    if (tok == "true") return true;
    if (tok == "false") return false;
    fail(where + ": expected true or false, got '" + tok + "'");
}

Side parse_side(const std::string& tok, const std::string& where) {
    if (tok == "bottom") return Side::bottom;
    if (tok == "right") return Side::right;
    if (tok == "top") return Side::top;
    if (tok == "left") return Side::left;
    fail(where + ": unknown side '" + tok + "'");
}

struct RawSection {
    std::vector<std::pair<std::string, std::string>> entries;  // file order

    bool has(const std::string& key) const {
        return std::any_of(entries.begin(), entries.end(),
                           [&](const auto& e) { return e.first == key; });
    }
    const std::string& get(const std::string& key, const std::string& sect) const {
        for (const auto& e : entries)
            if (e.first == key) return e.second;
        fail("[" + sect + "] is missing key '" + key + "'");
    }
    std::vector<std::string> get_all(const std::string& key) const {
        std::vector<std::string> out;
        for (const auto& e : entries)
            if (e.first == key) out.push_back(e.second);
        return out;
    }
};

// Known schema: section -> (key -> repeatable?).
const std::map<std::string, std::map<std::string, bool>>& schema() {
    static const std::map<std::string, std::map<std::string, bool>> s = {
        {"geometry", {{"a", false}, {"b", false}, {"c", false}, {"eps", false}}},
        {"cracks", {{"tips", false}}},
        {"material", {{"lambda", false}, {"mu", false}}},
        {"load", {{"preset", false}, {"beta", false}, {"gamma", false}, {"patch", true}}},
        {"solver", {{"h", false}, {"grading", false}}},
        {"indicator",
         {{"tau_lo", false}, {"tau_count", false}, {"tau_ratio", false}, {"weight", false}}},
        {"probes",
         {{"x1", false}, {"scan_lo", false}, {"scan_hi", false}, {"scan_count", false}}},
        {"oracle", {{"series", true}}},
        {"output", {{"dir", false}, {"svg", false}}},
    };
    return s;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    // ---- tokenize into sections ---------------------------------------------
    std::map<std::string, RawSection> raw;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string at = " (line " + std::to_string(lineno) + ")";
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header" + at);
            section = trim(line.substr(1, line.size() - 2));
            if (schema().find(section) == schema().end())
                fail("unknown section [" + section + "]" + at);
            if (raw.find(section) != raw.end()) fail("duplicate section [" + section + "]" + at);
            raw[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'" + at);
        if (section.empty()) fail("key outside any section" + at);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& keys = schema().at(section);
        const auto ks = keys.find(key);
        if (ks == keys.end()) fail("unknown key '" + key + "' in [" + section + "]" + at);
        auto& sect = raw.at(section);
        if (!ks->second && sect.has(key))
            fail("duplicate key '" + key + "' in [" + section + "]" + at);
        sect.entries.emplace_back(key, value);
    }

    for (const char* req :
         {"geometry", "cracks", "material", "load", "solver", "indicator", "probes", "output"})
        if (raw.find(req) == raw.end()) fail(std::string("missing section [") + req + "]");

    RunConfig cfg;
    for (const auto& [name, sect] : raw) {
        std::string canon;
        for (const auto& [k, v] : sect.entries) canon += k + " = " + v + "\n";
        cfg.canonical[name] = canon;
    }

    // ---- geometry / cracks / material ----------------------------------------
    {
        const auto& g = raw.at("geometry");
        cfg.geom = PlateGeometry(parse_double(g.get("a", "geometry"), "a"),
                                 parse_double(g.get("b", "geometry"), "b"),
                                 parse_double(g.get("c", "geometry"), "c"),
                                 parse_double(g.get("eps", "geometry"), "eps"));
    }
    {
        const std::string tips = raw.at("cracks").get("tips", "cracks");
        std::vector<double> t;
        if (trim(tips) != "none")
            for (const auto& tok : split_ws(tips)) t.push_back(parse_double(tok, "tips"));
        cfg.cracks = CrackConfig(std::move(t), cfg.geom);
    }
    {
        const auto& m = raw.at("material");
        cfg.mat = Material(parse_double(m.get("lambda", "material"), "lambda"),
                           parse_double(m.get("mu", "material"), "mu"));
    }

    // ---- load ------------------------------------------------------------------
    {
        const auto& l = raw.at("load");
        const std::string preset = l.get("preset", "load");
        if (preset == "tension" || preset == "oblique") {
            if (l.has("patch")) fail("[load] patch lines are only valid with preset = inline");
            const double beta = parse_double(l.get("beta", "load"), "beta");
            const double gamma = parse_double(l.get("gamma", "load"), "gamma");
            cfg.load = preset == "tension" ? make_tension_load(cfg.geom, beta, gamma)
                                           : make_oblique_load(cfg.geom, beta, gamma);
        } else if (preset == "inline") {
            if (l.has("beta") || l.has("gamma"))
                fail("[load] beta/gamma are only valid with the tension and oblique presets");
            const auto lines = l.get_all("patch");
            if (lines.empty()) fail("[load] preset = inline needs at least one patch line");
            cfg.load.name = "inline";
            cfg.load.gamma = 0.0;
            for (const auto& ln : lines) {
                const auto toks = split_ws(ln);
                if (toks.size() != 5) fail("[load] patch needs: side lo hi tx ty");
                LoadPatch p;
                p.side = parse_side(toks[0], "patch");
                p.lo = parse_double(toks[1], "patch lo");
                p.hi = parse_double(toks[2], "patch hi");
                p.traction = Vec2{parse_double(toks[3], "patch tx"),
                                  parse_double(toks[4], "patch ty")};
                if (!(p.lo < p.hi)) fail("[load] patch needs lo < hi");
                if (p.lo < 0.0 || p.hi > side_length(cfg.geom, p.side))
                    fail("[load] patch interval leaves its side");
                cfg.load.patches.push_back(p);
            }
        } else {
            fail("[load] unknown preset '" + preset + "'");
        }
    }

    // ---- solver / indicator ------------------------------------------------------
    {
        const auto& s = raw.at("solver");
        cfg.mesh_opt.h = parse_double(s.get("h", "solver"), "h");
        cfg.mesh_opt.tip_grading = static_cast<int>(parse_int(s.get("grading", "solver"), "grading"));
        if (!(cfg.mesh_opt.h > 0.0)) fail("[solver] h must be positive");
        if (cfg.mesh_opt.tip_grading < 0 || cfg.mesh_opt.tip_grading > 10)
            fail("[solver] grading must lie in [0, 10]");
    }
    {
        const auto& i = raw.at("indicator");
        cfg.tau_lo = parse_double(i.get("tau_lo", "indicator"), "tau_lo");
        cfg.tau_count = static_cast<int>(parse_int(i.get("tau_count", "indicator"), "tau_count"));
        cfg.tau_ratio = parse_double(i.get("tau_ratio", "indicator"), "tau_ratio");
        const std::string w = i.get("weight", "indicator");
        if (w == "auto") {
            cfg.weight_auto = true;
        } else {
            cfg.weight_auto = false;
            cfg.weight_value = parse_double(w, "weight");
            if (!(cfg.weight_value > 0.0)) fail("[indicator] weight must be positive or auto");
        }
        if (!(cfg.tau_lo > 0.0)) fail("[indicator] tau_lo must be positive");
        if (!(cfg.tau_ratio > 1.0)) fail("[indicator] tau_ratio must exceed 1");
    }

    // ---- probes --------------------------------------------------------------------
    {
        const auto& p = raw.at("probes");
        const bool explicit_list = p.has("x1");
        const bool scan = p.has("scan_lo") || p.has("scan_hi") || p.has("scan_count");
        if (explicit_list == scan)
            fail("[probes] give either x1 or the scan_lo/scan_hi/scan_count triple");
        if (explicit_list) {
            for (const auto& tok : split_ws(p.get("x1", "probes")))
                cfg.probe_x1.push_back(parse_double(tok, "x1"));
            if (cfg.probe_x1.empty()) fail("[probes] x1 list is empty");
        } else {
            cfg.scan_mode = true;
            cfg.scan_lo = parse_double(p.get("scan_lo", "probes"), "scan_lo");
            cfg.scan_hi = parse_double(p.get("scan_hi", "probes"), "scan_hi");
            cfg.scan_count = static_cast<int>(parse_int(p.get("scan_count", "probes"), "scan_count"));
            if (!(cfg.scan_lo < cfg.scan_hi)) fail("[probes] scan_lo must be below scan_hi");
            if (cfg.scan_count < 2) fail("[probes] scan_count must be at least 2");
        }
        for (const double x : cfg.probes())
            if (x < 0.0 || x > cfg.geom.a) fail("[probes] abscissae must lie in [0, a]");
    }

    // ---- oracle ------------------------------------------------------------------------
    if (raw.find("oracle") != raw.end()) {
        for (const auto& ln : raw.at("oracle").get_all("series")) {
            const auto toks = split_ws(ln);
            if (toks.size() < 4 || toks.size() % 2 != 0)
                fail("[oracle] series needs: tip_index eta A1 B1 [A2 B2 ...]");
            SeriesCoefficients sc;
            sc.tip_index = static_cast<int>(parse_int(toks[0], "series tip_index"));
            sc.eta = parse_double(toks[1], "series eta");
            for (size_t k = 2; k + 1 < toks.size(); k += 2)
                sc.modes.emplace_back(parse_double(toks[k], "series A"),
                                      parse_double(toks[k + 1], "series B"));
            validate_series(sc, cfg.geom, cfg.cracks);
            cfg.series.push_back(std::move(sc));
        }
        if (cfg.series.empty()) fail("[oracle] needs at least one series line");
    }

    // ---- output ----------------------------------------------------------------------
    {
        const auto& o = raw.at("output");
        cfg.out_dir = o.get("dir", "output");
        if (cfg.out_dir.empty()) fail("[output] dir must not be empty");
        cfg.write_svg = parse_bool(o.get("svg", "output"), "svg");
    }

    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::vector<double> RunConfig::probes() const {
    if (!scan_mode) return probe_x1;
    std::vector<double> out;
    out.reserve(static_cast<size_t>(scan_count));
    for (int k = 0; k < scan_count; ++k)
        out.push_back(scan_lo + (scan_hi - scan_lo) * static_cast<double>(k) /
                                    static_cast<double>(scan_count - 1));
    return out;
}

double RunConfig::weight_s() const { return weight_auto ? geom.scan_radius() : weight_value; }

std::vector<double> RunConfig::tau_grid() const {
    if (tau_count < 8)
        fail("tau_count must be at least 8: the extraction tail fits need that many samples");
    return geometric_tau_grid(tau_lo, tau_count, tau_ratio);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string sections_hash(const RunConfig& cfg, const std::vector<std::string>& sections) {
    std::string all;
    for (const auto& name : sections) {
        const auto it = cfg.canonical.find(name);
        if (it == cfg.canonical.end()) continue;
        all += "[" + name + "]\n" + it->second;
    }
    return hash_hex(fnv1a64(all));
}

}  // namespace weldcrack
