// Command-line driver: parses one run-configuration file and executes the
// requested pipeline stage.  All heavy lifting lives in the library; this
// file only maps flags to calls and exceptions to exit codes.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "weldcrack/config.hpp"
#include "weldcrack/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Crack reconstruction on a welded two-plate specimen"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the shared flags after the subcommand too

    std::string config_path;
    std::string out_override;
    bool use_oracle = false;
    int threads = 1;
    long seed = 0;

    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_override, "output directory (defaults to the config's)");
    app.add_flag("--oracle", use_oracle, "synthesize curves from the [oracle] series");
    app.add_option("--threads", threads, "worker threads for the probe sweep")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed recorded in the manifest (randomized tests only)");

    auto* c_forward = app.add_subcommand("forward", "solve the traction problem, write the trace");
    auto* c_indicate = app.add_subcommand("indicate", "compute indicator curves per probe");
    auto* c_extract = app.add_subcommand("extract", "recover tangency data and tip estimates");
    auto* c_scan = app.add_subcommand("scan", "fixed-radius tip/non-tip classification");
    auto* c_oracle = app.add_subcommand("oracle", "indicator curves from the synthetic series");
    auto* c_pipeline = app.add_subcommand("pipeline", "all stages in sequence plus manifest");

    CLI11_PARSE(app, argc, argv);

    std::string stage = "setup";
    try {
        const weldcrack::RunConfig cfg = weldcrack::load_run_config(config_path);
        const std::string out = out_override.empty() ? cfg.out_dir : out_override;

        std::vector<std::string> files;
        if (c_forward->parsed()) {
            stage = "forward";
            files = weldcrack::cmd_forward(cfg, out);
        } else if (c_indicate->parsed()) {
            stage = "indicate";
            files = weldcrack::cmd_indicate(cfg, out, use_oracle, threads);
        } else if (c_oracle->parsed()) {
            stage = "oracle";
            files = weldcrack::cmd_indicate(cfg, out, true, threads);
        } else if (c_extract->parsed()) {
            stage = "extract";
            files = weldcrack::cmd_extract(cfg, out);
        } else if (c_scan->parsed()) {
            stage = "scan";
            files = weldcrack::cmd_scan(cfg, out);
        } else if (c_pipeline->parsed()) {
            stage = "pipeline";
            files = weldcrack::cmd_pipeline(cfg, out, use_oracle, threads, seed);
        }
        for (const auto& f : files) std::printf("%s\n", f.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "weldcrack %s: %s\n", stage.c_str(), e.what());
        return 1;
    }
}
