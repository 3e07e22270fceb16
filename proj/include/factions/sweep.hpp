#pragma once
// Parameter-grid expansion, per-run seed derivation, and parallel execution
// of independent runs with deterministic aggregation.

#include <cstdint>
#include <functional>
#include <vector>

#include "factions/metrics.hpp"

namespace factions::sweep {

struct SweepConfig {
    // Swept parameters; the grid is their Cartesian product, expanded with N
    // outermost and experiment_mode innermost.
    std::vector<int> num_agents;
    std::vector<int> pulls_per_round;
    std::vector<double> epsilon;
    std::vector<double> mistrust;
    std::vector<int> num_problems{2};
    std::vector<UpdateMode> update_modes{UpdateMode::Anti};
    std::vector<ExperimentMode> experiment_modes{ExperimentMode::Coevolve};

    int runs_per_combo = 1024;
    std::uint64_t base_seed = 1;
    int workers = 0; // 0 = one per hardware thread

    // Shared across every combination.
    int max_rounds = 10000;
    int stability_window = 10;
    double true_threshold = 0.99;
    double low_threshold_anti = 0.01;
    double false_threshold = 0.5;
};

// Cartesian product in the documented order; every combination is validated
// before anything runs, and an invalid one aborts with a message naming it.
std::vector<ModelConfig> expand_grid(const SweepConfig& config);

// Stable, platform-independent mixing of (base_seed, combo, run); injective
// in practice over any realistic grid.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t combo_index, std::uint64_t run_index);

// A run carried over from a previous, interrupted execution; its slot is
// not re-executed.
struct CompletedRun {
    int combo_index = 0;
    int run_index = 0;
    RunResult result;
};

// Called for every newly executed run; invocations are serialized. Used for
// append-only checkpointing.
using RunSink = std::function<void(int combo_index, int run_index, const RunResult&)>;

struct SweepOutput {
    std::vector<ModelConfig> grid;
    std::vector<std::vector<RunResult>> runs_by_combo; // [combo][run_index]
    std::vector<metrics::SweepSummaryRow> summary;     // [combo]
};

// Executes every (combo, run) pair on a worker pool. Results, and therefore
// the summary rows, are identical for any worker count.
SweepOutput execute_sweep(const SweepConfig& config, const std::vector<CompletedRun>& preloaded = {},
                          const RunSink& on_run = {});

} // namespace factions::sweep
