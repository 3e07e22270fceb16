#include "factions/sweep.hpp"

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "factions/rng.hpp"

namespace factions::sweep {

namespace {

std::string describe_combo(std::size_t index, const ModelConfig& c) {
    return "combination " + std::to_string(index) + " (N=" + std::to_string(c.num_agents) +
           ", n=" + std::to_string(c.pulls_per_round) + ", epsilon=" + std::to_string(c.epsilon) +
           ", m=" + std::to_string(c.mistrust) + ", problems=" + std::to_string(c.num_problems) +
           ", update_mode=" + to_string(c.update_mode) +
           ", experiment_mode=" + to_string(c.experiment_mode) + ")";
}

} // namespace

std::vector<ModelConfig> expand_grid(const SweepConfig& config) {
    const auto require_nonempty = [](const char* key, std::size_t size) {
        if (size == 0) throw std::invalid_argument(std::string(key) + ": value list must not be empty");
    };
    require_nonempty("N", config.num_agents.size());
    require_nonempty("n", config.pulls_per_round.size());
    require_nonempty("epsilon", config.epsilon.size());
    require_nonempty("m", config.mistrust.size());
    require_nonempty("problems", config.num_problems.size());
    require_nonempty("update_mode", config.update_modes.size());
    require_nonempty("experiment_mode", config.experiment_modes.size());

    std::vector<ModelConfig> grid;
    grid.reserve(config.num_agents.size() * config.pulls_per_round.size() * config.epsilon.size() *
                 config.mistrust.size() * config.num_problems.size() * config.update_modes.size() *
                 config.experiment_modes.size());
    for (int agents : config.num_agents)
        for (int pulls : config.pulls_per_round)
            for (double eps : config.epsilon)
                for (double m : config.mistrust)
                    for (int problems : config.num_problems)
                        for (UpdateMode update : config.update_modes)
                            for (ExperimentMode experiment : config.experiment_modes) {
                                ModelConfig c;
                                c.num_agents = agents;
                                c.pulls_per_round = pulls;
                                c.epsilon = eps;
                                c.mistrust = m;
                                c.num_problems = problems;
                                c.update_mode = update;
                                c.experiment_mode = experiment;
                                c.max_rounds = config.max_rounds;
                                c.stability_window = config.stability_window;
                                c.true_threshold = config.true_threshold;
                                c.low_threshold_anti = config.low_threshold_anti;
                                c.false_threshold = config.false_threshold;
                                grid.push_back(c);
                            }

    for (std::size_t i = 0; i < grid.size(); ++i) {
        try {
            grid[i].validate();
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(describe_combo(i, grid[i]) + ": " + e.what());
        }
    }
    return grid;
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t combo_index, std::uint64_t run_index) {
    return splitmix64(splitmix64(splitmix64(base_seed) ^ combo_index) ^ run_index);
}

SweepOutput execute_sweep(const SweepConfig& config, const std::vector<CompletedRun>& preloaded,
                          const RunSink& on_run) {
    if (config.runs_per_combo < 1)
        throw std::invalid_argument("runs_per_combo: " + std::to_string(config.runs_per_combo) +
                                    " is outside the accepted range [1, ...)");

    SweepOutput out;
    out.grid = expand_grid(config);
    const std::size_t combos = out.grid.size();
    const std::size_t runs = static_cast<std::size_t>(config.runs_per_combo);

    out.runs_by_combo.assign(combos, std::vector<RunResult>(runs));
    std::vector<char> done(combos * runs, 0);

    for (const auto& pre : preloaded) {
        if (pre.combo_index < 0 || static_cast<std::size_t>(pre.combo_index) >= combos ||
            pre.run_index < 0 || static_cast<std::size_t>(pre.run_index) >= runs)
            throw std::invalid_argument("checkpoint record (combo " + std::to_string(pre.combo_index) +
                                        ", run " + std::to_string(pre.run_index) +
                                        ") does not fit this sweep's grid");
        const std::uint64_t expected =
            derive_seed(config.base_seed, static_cast<std::uint64_t>(pre.combo_index),
                        static_cast<std::uint64_t>(pre.run_index));
        if (pre.result.seed != expected)
            throw std::invalid_argument("checkpoint record (combo " + std::to_string(pre.combo_index) +
                                        ", run " + std::to_string(pre.run_index) +
                                        ") was produced with a different base seed");
        const std::size_t slot =
            static_cast<std::size_t>(pre.combo_index) * runs + static_cast<std::size_t>(pre.run_index);
        RunResult restored = pre.result;
        restored.config = out.grid[static_cast<std::size_t>(pre.combo_index)];
        out.runs_by_combo[static_cast<std::size_t>(pre.combo_index)][static_cast<std::size_t>(
            pre.run_index)] = std::move(restored);
        done[slot] = 1;
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> tasks;
    tasks.reserve(combos * runs);
    for (std::size_t c = 0; c < combos; ++c)
        for (std::size_t r = 0; r < runs; ++r)
            if (!done[c * runs + r]) tasks.emplace_back(static_cast<std::uint32_t>(c),
                                                        static_cast<std::uint32_t>(r));

    int workers = config.workers;
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (static_cast<std::size_t>(workers) > tasks.size() && !tasks.empty())
        workers = static_cast<int>(tasks.size());

    std::atomic<std::size_t> cursor{0};
    std::mutex sink_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::size_t t = cursor.fetch_add(1);
            if (t >= tasks.size()) return;
            const auto [c, r] = tasks[t];
            try {
                const std::uint64_t seed = derive_seed(config.base_seed, c, r);
                RunResult result = run_simulation(out.grid[c], seed);
                if (on_run) {
                    std::lock_guard<std::mutex> lock(sink_mutex);
                    on_run(static_cast<int>(c), static_cast<int>(r), result);
                }
                out.runs_by_combo[c][r] = std::move(result);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                cursor.store(tasks.size());
                return;
            }
        }
    };

    if (workers == 1 || tasks.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    out.summary.reserve(combos);
    for (std::size_t c = 0; c < combos; ++c) out.summary.push_back(metrics::aggregate_runs(out.runs_by_combo[c]));
    return out;
}

} // namespace factions::sweep
