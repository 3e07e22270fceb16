#include "factions/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "factions/engine.hpp"
#include "factions/io.hpp"
#include "factions/version.hpp"

namespace factions::cli {

namespace {

using nlohmann::json;

// "a..b step s" -> inclusive arithmetic progression.
std::vector<double> parse_range_string(const std::string& key, const std::string& text) {
    const auto dots = text.find("..");
    const auto step_kw = text.find(" step ");
    if (dots == std::string::npos || step_kw == std::string::npos || step_kw < dots)
        throw std::invalid_argument(key + ": '" + text + "' is not of the form '<from>..<to> step <size>'");
    double from = 0.0, to = 0.0, step = 0.0;
    try {
        from = io::parse_double(text.substr(0, dots));
        to = io::parse_double(text.substr(dots + 2, step_kw - dots - 2));
        step = io::parse_double(text.substr(step_kw + 6));
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": '" + text + "' is not of the form '<from>..<to> step <size>'");
    }
    if (!(step > 0.0)) throw std::invalid_argument(key + ": range step must be positive");
    if (to < from) throw std::invalid_argument(key + ": range end must not precede its start");
    std::vector<double> values;
    for (int i = 0;; ++i) {
        const double v = from + step * static_cast<double>(i);
        if (v > to + step * 1e-9) break;
        values.push_back(v);
    }
    return values;
}

std::vector<double> number_list(const std::string& key, const json& value) {
    std::vector<double> out;
    if (value.is_number()) {
        out.push_back(value.get<double>());
    } else if (value.is_string()) {
        out = parse_range_string(key, value.get<std::string>());
    } else if (value.is_array()) {
        for (const auto& item : value) {
            if (!item.is_number())
                throw std::invalid_argument(key + ": list entries must be numbers");
            out.push_back(item.get<double>());
        }
    } else {
        throw std::invalid_argument(key + ": expected a number, a list of numbers, or a range string");
    }
    if (out.empty()) throw std::invalid_argument(key + ": value list must not be empty");
    return out;
}

std::vector<int> int_list(const std::string& key, const json& value) {
    std::vector<int> out;
    for (double v : number_list(key, value)) {
        if (std::floor(v) != v)
            throw std::invalid_argument(key + ": " + io::format_double(v) + " is not an integer");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<std::string> string_list(const std::string& key, const json& value) {
    std::vector<std::string> out;
    if (value.is_string()) {
        out.push_back(value.get<std::string>());
    } else if (value.is_array()) {
        for (const auto& item : value) {
            if (!item.is_string()) throw std::invalid_argument(key + ": list entries must be strings");
            out.push_back(item.get<std::string>());
        }
    } else {
        throw std::invalid_argument(key + ": expected a string or a list of strings");
    }
    if (out.empty()) throw std::invalid_argument(key + ": value list must not be empty");
    return out;
}

int scalar_int(const std::string& key, const json& value) {
    if (!value.is_number() || std::floor(value.get<double>()) != value.get<double>())
        throw std::invalid_argument(key + ": expected an integer");
    return static_cast<int>(value.get<double>());
}

double scalar_double(const std::string& key, const json& value) {
    if (!value.is_number()) throw std::invalid_argument(key + ": expected a number");
    return value.get<double>();
}

} // namespace

SweepFileConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument(path.string() + ": top level must be an object");
    // A meta.json written by `sweep` nests the effective config under "config".
    if (root.contains("config")) {
        if (!root["config"].is_object())
            throw std::invalid_argument(path.string() + ": 'config' must be an object");
        root = root["config"];
    }

    static const std::set<std::string> known{
        "N", "n", "epsilon", "m", "problems", "update_mode", "experiment_mode",
        "runs_per_combo", "base_seed", "workers", "max_rounds", "stability_window",
        "true_threshold", "low_threshold_anti", "false_threshold", "save_runs"};
    for (const auto& [key, value] : root.items()) {
        (void)value;
        if (!known.count(key)) {
            std::string accepted;
            for (const auto& k : known) accepted += (accepted.empty() ? "" : ", ") + k;
            throw std::invalid_argument("unknown key '" + key + "'; accepted keys: " + accepted);
        }
    }
    for (const char* key : {"N", "n", "epsilon", "m"})
        if (!root.contains(key)) throw std::invalid_argument(std::string("missing required key '") + key + "'");

    SweepFileConfig out;
    auto& cfg = out.sweep;
    cfg.num_agents = int_list("N", root["N"]);
    cfg.pulls_per_round = int_list("n", root["n"]);
    cfg.epsilon = number_list("epsilon", root["epsilon"]);
    cfg.mistrust = number_list("m", root["m"]);
    if (root.contains("problems")) cfg.num_problems = int_list("problems", root["problems"]);
    if (root.contains("update_mode")) {
        cfg.update_modes.clear();
        for (const auto& s : string_list("update_mode", root["update_mode"]))
            cfg.update_modes.push_back(update_mode_from_string(s));
    }
    if (root.contains("experiment_mode")) {
        cfg.experiment_modes.clear();
        for (const auto& s : string_list("experiment_mode", root["experiment_mode"]))
            cfg.experiment_modes.push_back(experiment_mode_from_string(s));
    }
    if (root.contains("runs_per_combo")) cfg.runs_per_combo = scalar_int("runs_per_combo", root["runs_per_combo"]);
    if (cfg.runs_per_combo < 1)
        throw std::invalid_argument("runs_per_combo: " + std::to_string(cfg.runs_per_combo) +
                                    " is outside the accepted range [1, ...)");
    if (root.contains("base_seed")) {
        if (!root["base_seed"].is_number_unsigned() && !root["base_seed"].is_number_integer())
            throw std::invalid_argument("base_seed: expected a non-negative integer");
        cfg.base_seed = root["base_seed"].get<std::uint64_t>();
    }
    if (root.contains("workers")) {
        const auto& w = root["workers"];
        if (w.is_string() && w.get<std::string>() == "auto") cfg.workers = 0;
        else if (w.is_number()) {
            cfg.workers = scalar_int("workers", w);
            if (cfg.workers < 1)
                throw std::invalid_argument("workers: " + std::to_string(cfg.workers) +
                                            " is outside the accepted range [1, ...) (or 'auto')");
        } else {
            throw std::invalid_argument("workers: expected a positive integer or 'auto'");
        }
    }
    if (root.contains("max_rounds")) cfg.max_rounds = scalar_int("max_rounds", root["max_rounds"]);
    if (root.contains("stability_window")) cfg.stability_window = scalar_int("stability_window", root["stability_window"]);
    if (root.contains("true_threshold")) cfg.true_threshold = scalar_double("true_threshold", root["true_threshold"]);
    if (root.contains("low_threshold_anti")) cfg.low_threshold_anti = scalar_double("low_threshold_anti", root["low_threshold_anti"]);
    if (root.contains("false_threshold")) cfg.false_threshold = scalar_double("false_threshold", root["false_threshold"]);
    if (root.contains("save_runs")) {
        if (!root["save_runs"].is_boolean()) throw std::invalid_argument("save_runs: expected true or false");
        out.save_runs = root["save_runs"].get<bool>();
    }

    (void)sweep::expand_grid(cfg); // validate every combination up front
    return out;
}

ModelConfig single_config(const sweep::SweepConfig& config) {
    const auto grid = sweep::expand_grid(config);
    if (grid.size() != 1)
        throw std::invalid_argument("this command needs a single parameter combination; the config expands to " +
                                    std::to_string(grid.size()));
    return grid.front();
}

int cmd_validate(const std::filesystem::path& config_path) {
    try {
        const auto parsed = parse_config_file(config_path);
        nlohmann::ordered_json echo;
        echo["config"] = io::sweep_config_json(parsed.sweep, parsed.save_runs);
        echo["combinations"] = sweep::expand_grid(parsed.sweep).size();
        std::cout << echo.dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_run(const RunOptions& options) {
    ModelConfig config;
    try {
        config = single_config(parse_config_file(options.config_path).sweep);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    try {
        std::filesystem::create_directories(options.out_dir);
        const auto trajectory_path = options.out_dir / "trajectory.csv";
        const auto tmp_path = options.out_dir / "trajectory.csv.tmp";
        std::ofstream trajectory(tmp_path, std::ios::binary | std::ios::trunc);
        if (!trajectory) throw std::runtime_error("cannot write " + tmp_path.string());
        trajectory << "round,agent,problem,credence\n";
        const auto observer = [&](int round, const Population& population) {
            for (const auto& agent : population)
                for (std::size_t p = 0; p < agent.beliefs.size(); ++p)
                    trajectory << round << ',' << agent.id << ',' << p << ','
                               << io::format_double(agent.beliefs[p]) << '\n';
        };

        const RunResult result = run_simulation(config, options.seed, observer);
        trajectory.flush();
        if (!trajectory) throw std::runtime_error("write failed for " + tmp_path.string());
        trajectory.close();
        std::filesystem::rename(tmp_path, trajectory_path);

        nlohmann::ordered_json j;
        j["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
        j["config"] = io::model_config_json(result.config);
        j["seed"] = result.seed;
        j["rounds"] = result.rounds;
        j["resolved"] = result.outcome.resolved;
        std::vector<std::string> outcomes;
        for (auto o : result.outcome.per_problem) {
            switch (o) {
                case ProblemOutcome::TrueConsensus: outcomes.emplace_back("true_consensus"); break;
                case ProblemOutcome::FalseConsensus: outcomes.emplace_back("false_consensus"); break;
                case ProblemOutcome::Polarized: outcomes.emplace_back("polarized"); break;
                case ProblemOutcome::Unclassified: outcomes.emplace_back("unclassified"); break;
            }
        }
        j["outcome_per_problem"] = outcomes;
        j["abs_correlation"] = result.abs_correlation;
        j["true_belief_fraction"] = result.true_belief_fraction;
        j["per_problem_true_fraction"] = result.per_problem_true_fraction;
        j["final_beliefs"] = result.final_beliefs;
        io::write_file_atomic(options.out_dir / "result.json", j.dump(2) + "\n");

        std::cout << "run finished: " << result.rounds << " rounds, "
                  << (result.outcome.resolved ? "resolved" : "unresolved") << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_sweep(const SweepOptions& options) {
    SweepFileConfig parsed;
    try {
        parsed = parse_config_file(options.config_path);
        if (options.seed) parsed.sweep.base_seed = *options.seed;
        if (options.workers) parsed.sweep.workers = *options.workers;
        if (options.save_runs) parsed.save_runs = true;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        const auto& cfg = parsed.sweep;
        std::filesystem::create_directories(options.out_dir);
        const auto checkpoint_path = options.out_dir / "checkpoint.csv";

        std::vector<sweep::CompletedRun> preloaded;
        if (options.resume && std::filesystem::exists(checkpoint_path)) {
            for (auto& rec : io::read_run_records(checkpoint_path))
                preloaded.push_back({rec.combo_index, rec.run_index, std::move(rec.result)});
            std::cout << "resuming: " << preloaded.size() << " runs loaded from "
                      << checkpoint_path.string() << "\n";
        }

        const bool fresh_checkpoint = !std::filesystem::exists(checkpoint_path) || !options.resume;
        std::ofstream checkpoint(checkpoint_path,
                                 fresh_checkpoint ? std::ios::binary | std::ios::trunc
                                                  : std::ios::binary | std::ios::app);
        if (!checkpoint) throw std::runtime_error("cannot write " + checkpoint_path.string());
        if (fresh_checkpoint) {
            preloaded.clear();
            checkpoint << io::kRunRecordHeader << '\n';
            checkpoint.flush();
        }

        const auto sink = [&](int combo, int run, const RunResult& result) {
            checkpoint << io::run_record_csv(combo, run, result, parsed.save_runs) << '\n';
            checkpoint.flush();
        };

        const auto output = sweep::execute_sweep(cfg, preloaded, sink);

        std::string summary{io::kSummaryHeader};
        summary += '\n';
        for (const auto& row : output.summary) {
            summary += io::summary_row_csv(row);
            summary += '\n';
        }
        io::write_file_atomic(options.out_dir / "summary.csv", summary);

        if (parsed.save_runs) {
            std::string runs{io::kRunRecordHeader};
            runs += '\n';
            for (std::size_t c = 0; c < output.runs_by_combo.size(); ++c)
                for (std::size_t r = 0; r < output.runs_by_combo[c].size(); ++r) {
                    runs += io::run_record_csv(static_cast<int>(c), static_cast<int>(r),
                                               output.runs_by_combo[c][r], true);
                    runs += '\n';
                }
            io::write_file_atomic(options.out_dir / "runs.csv", runs);
        }

        nlohmann::ordered_json meta;
        meta["tool"] = {{"name", std::string(kToolName)}, {"version", std::string(kToolVersion)}};
        meta["config"] = io::sweep_config_json(cfg, parsed.save_runs);
        meta["combinations"] = output.grid.size();
        io::write_file_atomic(options.out_dir / "meta.json", meta.dump(2) + "\n");

        std::cout << "sweep finished: " << output.grid.size() << " combinations x "
                  << cfg.runs_per_combo << " runs -> " << (options.out_dir / "summary.csv").string()
                  << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

using SeriesKey = std::tuple<int, int, int, int, double, double>; // update, problems, N, n, eps, m

SeriesKey series_key(const metrics::SweepSummaryRow& row) {
    return {static_cast<int>(row.config.update_mode), row.config.num_problems, row.config.num_agents,
            row.config.pulls_per_round, row.config.epsilon, row.config.mistrust};
}

std::string key_columns(const metrics::SweepSummaryRow& row) {
    const auto& c = row.config;
    std::string out;
    out += to_string(c.experiment_mode);
    out += ',';
    out += to_string(c.update_mode);
    out += ',';
    out += std::to_string(c.num_problems);
    out += ',';
    out += std::to_string(c.num_agents);
    out += ',';
    out += std::to_string(c.pulls_per_round);
    out += ',';
    out += io::format_double(c.epsilon);
    out += ',';
    out += io::format_double(c.mistrust);
    return out;
}

bool row_order(const metrics::SweepSummaryRow& a, const metrics::SweepSummaryRow& b) {
    const auto ka = std::tuple_cat(std::make_tuple(static_cast<int>(a.config.experiment_mode)), series_key(a));
    const auto kb = std::tuple_cat(std::make_tuple(static_cast<int>(b.config.experiment_mode)), series_key(b));
    return ka < kb;
}

std::string optional_cell(const std::optional<double>& v) {
    return v ? io::format_double(*v) : std::string{};
}

} // namespace

int cmd_plotdata(const PlotdataOptions& options) {
    try {
        std::vector<metrics::SweepSummaryRow> rows;
        for (const auto& file : options.summary_files) {
            auto part = io::read_summary_csv(file);
            rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                        std::make_move_iterator(part.end()));
        }
        if (rows.empty()) throw std::runtime_error("no summary rows in the given inputs");
        std::sort(rows.begin(), rows.end(), row_order);
        std::filesystem::create_directories(options.out_dir);

        // Outcome fractions per combination.
        std::string outcomes =
            "experiment_mode,update_mode,problems,N,n,epsilon,m,"
            "frac_true_consensus,frac_false_consensus,frac_mixed_consensus,frac_some_polarized,"
            "frac_all_polarized,unresolved_frac,frac_true_p1,frac_false_p1,frac_polarized_p1,"
            "frac_true_p2,frac_false_p2,frac_polarized_p2,frac_true_p3,frac_false_p3,frac_polarized_p3\n";
        for (const auto& row : rows) {
            outcomes += key_columns(row);
            outcomes += ',' + io::format_double(row.frac_true_consensus);
            outcomes += ',' + io::format_double(row.frac_false_consensus);
            outcomes += ',' + io::format_double(row.frac_mixed_consensus);
            outcomes += ',' + io::format_double(row.frac_some_polarized);
            outcomes += ',' + io::format_double(row.frac_all_polarized);
            outcomes += ',' + io::format_double(row.unresolved_frac);
            for (int p = 0; p < 3; ++p) {
                if (p < row.config.num_problems) {
                    const auto& f = row.per_problem[static_cast<std::size_t>(p)];
                    outcomes += ',' + io::format_double(f.true_consensus);
                    outcomes += ',' + io::format_double(f.false_consensus);
                    outcomes += ',' + io::format_double(f.polarized);
                } else {
                    outcomes += ",,,";
                }
            }
            outcomes += '\n';
        }
        io::write_file_atomic(options.out_dir / "outcomes_vs_m.csv", outcomes);

        // Correlation: model rows joined with the matching independent baseline.
        std::map<SeriesKey, const metrics::SweepSummaryRow*> baseline;
        for (const auto& row : rows)
            if (row.config.experiment_mode == ExperimentMode::IndependentBaseline)
                baseline[series_key(row)] = &row;
        std::string correlation =
            "experiment_mode,update_mode,problems,N,n,epsilon,m,"
            "corr_all_model,corr_polarized_model,corr_all_baseline,corr_polarized_baseline\n";
        for (const auto& row : rows) {
            if (row.config.experiment_mode == ExperimentMode::IndependentBaseline) continue;
            correlation += key_columns(row);
            correlation += ',' + optional_cell(row.mean_abs_corr_all);
            correlation += ',' + optional_cell(row.mean_abs_corr_polarized);
            const auto it = baseline.find(series_key(row));
            if (it != baseline.end()) {
                correlation += ',' + optional_cell(it->second->mean_abs_corr_all);
                correlation += ',' + optional_cell(it->second->mean_abs_corr_polarized);
            } else {
                correlation += ",,";
            }
            correlation += '\n';
        }
        io::write_file_atomic(options.out_dir / "correlation_vs_m.csv", correlation);

        // Truth acquisition; one series per population size.
        std::string truth = "experiment_mode,update_mode,problems,N,n,epsilon,m,true_frac\n";
        for (const auto& row : rows) {
            truth += key_columns(row);
            truth += ',' + io::format_double(row.mean_true_fraction);
            truth += '\n';
        }
        io::write_file_atomic(options.out_dir / "truth_vs_m.csv", truth);

        std::cout << "plot data written to " << options.out_dir.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace factions::cli
