#include <doctest.h>

#include <string>
#include <unordered_set>
#include <vector>

#include "factions/io.hpp"
#include "factions/sweep.hpp"

using namespace factions;

namespace {

sweep::SweepConfig small_sweep() {
    sweep::SweepConfig cfg;
    cfg.num_agents = {6};
    cfg.pulls_per_round = {5};
    cfg.epsilon = {0.1};
    cfg.mistrust = {0.0, 2.0};
    cfg.num_problems = {2};
    cfg.update_modes = {UpdateMode::NoAnti};
    cfg.experiment_modes = {ExperimentMode::Coevolve};
    cfg.runs_per_combo = 8;
    cfg.base_seed = 77;
    cfg.max_rounds = 500;
    return cfg;
}

std::string summary_text(const std::vector<metrics::SweepSummaryRow>& rows) {
    std::string out;
    for (const auto& row : rows) {
        out += io::summary_row_csv(row);
        out += '\n';
    }
    return out;
}

} // namespace

TEST_CASE("expand_grid is an ordered cartesian product") {
    sweep::SweepConfig cfg;
    cfg.num_agents = {10};
    cfg.pulls_per_round = {5};
    cfg.epsilon = {0.1};
    cfg.mistrust = {0.0, 1.0};
    const auto grid = sweep::expand_grid(cfg);
    REQUIRE(grid.size() == 2);
    CHECK(grid[0].mistrust == 0.0);
    CHECK(grid[1].mistrust == 1.0);

    cfg.num_agents = {6, 20};
    const auto bigger = sweep::expand_grid(cfg);
    REQUIRE(bigger.size() == 4);
    CHECK(bigger[0].num_agents == 6);
    CHECK(bigger[0].mistrust == 0.0);
    CHECK(bigger[1].num_agents == 6);
    CHECK(bigger[1].mistrust == 1.0);
    CHECK(bigger[2].num_agents == 20);
}

TEST_CASE("expand_grid rejects empty lists and invalid combinations") {
    sweep::SweepConfig cfg;
    cfg.num_agents = {10};
    cfg.pulls_per_round = {5};
    cfg.epsilon = {};
    cfg.mistrust = {1.0};
    CHECK_THROWS_WITH_AS((void)sweep::expand_grid(cfg), "epsilon: value list must not be empty",
                         std::invalid_argument);

    cfg.epsilon = {0.1};
    cfg.num_agents = {7};
    cfg.experiment_modes = {ExperimentMode::Prepolarized};
    try {
        (void)sweep::expand_grid(cfg);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("combination 0") != std::string::npos);
        CHECK(msg.find("N=7") != std::string::npos);
        CHECK(msg.find("even") != std::string::npos);
    }
}

TEST_CASE("derive_seed is deterministic and spread out") {
    CHECK(sweep::derive_seed(1, 2, 3) == sweep::derive_seed(1, 2, 3));
    CHECK(sweep::derive_seed(1, 0, 0) != sweep::derive_seed(1, 0, 1));
    CHECK(sweep::derive_seed(1, 0, 0) != sweep::derive_seed(1, 1, 0));
    CHECK(sweep::derive_seed(1, 0, 0) != sweep::derive_seed(2, 0, 0));
}

TEST_CASE("derive_seed has no collisions over a million-run grid") {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(1u << 21);
    const std::uint64_t base = 987654321;
    for (std::uint64_t combo = 0; combo < 1000; ++combo)
        for (std::uint64_t run = 0; run < 1000; ++run)
            seen.insert(sweep::derive_seed(base, combo, run));
    CHECK(seen.size() == 1000u * 1000u);
}

TEST_CASE("execute_sweep is invariant to worker count") {
    auto cfg = small_sweep();
    cfg.workers = 1;
    const auto serial = sweep::execute_sweep(cfg);
    cfg.workers = 4;
    const auto parallel = sweep::execute_sweep(cfg);

    REQUIRE(serial.summary.size() == 2);
    CHECK(serial.summary[0].runs == 8);
    CHECK(summary_text(serial.summary) == summary_text(parallel.summary));
    for (std::size_t c = 0; c < serial.runs_by_combo.size(); ++c)
        for (std::size_t r = 0; r < serial.runs_by_combo[c].size(); ++r)
            CHECK(serial.runs_by_combo[c][r].final_beliefs == parallel.runs_by_combo[c][r].final_beliefs);
}

TEST_CASE("every run gets its derived seed") {
    auto cfg = small_sweep();
    const auto out = sweep::execute_sweep(cfg);
    for (std::size_t c = 0; c < out.runs_by_combo.size(); ++c)
        for (std::size_t r = 0; r < out.runs_by_combo[c].size(); ++r)
            CHECK(out.runs_by_combo[c][r].seed == sweep::derive_seed(cfg.base_seed, c, r));
}

TEST_CASE("resuming from partial results reproduces the full table") {
    auto cfg = small_sweep();
    const auto reference = sweep::execute_sweep(cfg);

    // pretend the first half of all runs were already checkpointed
    std::vector<sweep::CompletedRun> preloaded;
    for (std::size_t c = 0; c < reference.runs_by_combo.size(); ++c)
        for (std::size_t r = 0; r < 4; ++r)
            preloaded.push_back({static_cast<int>(c), static_cast<int>(r), reference.runs_by_combo[c][r]});

    int executed = 0;
    const auto resumed = sweep::execute_sweep(cfg, preloaded,
                                              [&](int, int, const RunResult&) { ++executed; });
    CHECK(executed == 8); // 2 combos x 4 remaining runs
    CHECK(summary_text(resumed.summary) == summary_text(reference.summary));
}

TEST_CASE("checkpoints from a different base seed are rejected") {
    auto cfg = small_sweep();
    const auto reference = sweep::execute_sweep(cfg);
    std::vector<sweep::CompletedRun> preloaded{{0, 0, reference.runs_by_combo[0][0]}};
    cfg.base_seed = 78;
    CHECK_THROWS_AS((void)sweep::execute_sweep(cfg, preloaded), std::invalid_argument);

    cfg.base_seed = 77;
    preloaded[0].run_index = 99; // outside runs_per_combo
    CHECK_THROWS_AS((void)sweep::execute_sweep(cfg, preloaded), std::invalid_argument);
}
