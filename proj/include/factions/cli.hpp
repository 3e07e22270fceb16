#pragma once
// Command implementations behind the command-line tool. Kept as library
// functions so the test suite can drive them directly.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "factions/sweep.hpp"

namespace factions::cli {

struct SweepFileConfig {
    sweep::SweepConfig sweep;
    bool save_runs = false;
};

// Parses a JSON config file (or a meta.json produced by cmd_sweep), fills
// defaults, and validates ranges. Unknown keys, out-of-range values and
// invalid mode combinations raise std::invalid_argument naming the key, the
// value and the accepted range.
SweepFileConfig parse_config_file(const std::filesystem::path& path);

// The single combination described by a config whose grid has size 1.
ModelConfig single_config(const sweep::SweepConfig& config);

struct RunOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir;
    std::uint64_t seed = 1;
};

struct SweepOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;   // overrides base_seed
    std::optional<int> workers;          // overrides config workers; 0 = auto
    bool save_runs = false;              // forces per-run records on
    bool resume = false;                 // skip runs already in the checkpoint
};

struct PlotdataOptions {
    std::vector<std::filesystem::path> summary_files;
    std::filesystem::path out_dir;
};

// Each returns a process exit code and reports errors on stderr.
int cmd_validate(const std::filesystem::path& config_path);
int cmd_run(const RunOptions& options);
int cmd_sweep(const SweepOptions& options);
int cmd_plotdata(const PlotdataOptions& options);

} // namespace factions::cli
