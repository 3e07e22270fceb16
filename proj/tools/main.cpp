// Command-line driver: deterministic simulation runs, parameter sweeps and
// plot-ready projections of the summary tables.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "factions/cli.hpp"
#include "factions/version.hpp"

namespace {

int parse_workers(const std::string& text) {
    if (text == "auto") return 0;
    try {
        const int k = std::stoi(text);
        if (k >= 1 && std::to_string(k) == text) return k;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--workers", "expected a positive integer or 'auto', got '" + text + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-belief bandit simulator with distance-weighted trust"};
    app.set_version_flag("--version", std::string(factions::kToolVersion));
    app.require_subcommand(1);

    // run
    factions::cli::RunOptions run_options;
    auto* run = app.add_subcommand("run", "Execute one simulation and dump its trajectory");
    run->add_option("--config", run_options.config_path, "Config file (single parameter combination)")
        ->required();
    run->add_option("--out", run_options.out_dir, "Output directory")->required();
    run->add_option("--seed", run_options.seed, "RNG seed for this run (default 1)");

    // sweep
    factions::cli::SweepOptions sweep_options;
    std::string workers_text;
    auto* sweep = app.add_subcommand("sweep", "Run a parameter grid and write summary tables");
    sweep->add_option("--config", sweep_options.config_path, "Sweep config file")->required();
    sweep->add_option("--out", sweep_options.out_dir, "Output directory")->required();
    std::uint64_t seed_override = 0;
    auto* seed_opt = sweep->add_option("--seed", seed_override, "Override the base seed");
    auto* workers_opt = sweep->add_option("--workers", workers_text, "Worker threads (k or 'auto')");
    sweep->add_flag("--save-runs", sweep_options.save_runs, "Also write per-run records (runs.csv)");
    sweep->add_flag("--resume", sweep_options.resume, "Skip runs already present in the checkpoint");

    // plotdata
    factions::cli::PlotdataOptions plot_options;
    auto* plotdata = app.add_subcommand("plotdata", "Project summary files into tidy per-figure CSVs");
    plotdata->add_option("summaries", plot_options.summary_files, "summary.csv files from `sweep`")
        ->required()
        ->expected(-1);
    plotdata->add_option("--out", plot_options.out_dir, "Output directory")->required();

    // validate
    std::string validate_config;
    auto* validate = app.add_subcommand("validate", "Parse a config file and echo the resolved values");
    validate->add_option("--config", validate_config, "Config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return factions::cli::cmd_run(run_options);
    if (sweep->parsed()) {
        if (*seed_opt) sweep_options.seed = seed_override;
        if (*workers_opt) {
            try {
                sweep_options.workers = parse_workers(workers_text);
            } catch (const CLI::ValidationError& e) {
                std::cerr << e.what() << "\n";
                return 1;
            }
        }
        return factions::cli::cmd_sweep(sweep_options);
    }
    if (plotdata->parsed()) return factions::cli::cmd_plotdata(plot_options);
    if (validate->parsed()) return factions::cli::cmd_validate(validate_config);
    return 1;
}
