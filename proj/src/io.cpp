#include "factions/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace factions::io {

namespace {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
        start = end + 1;
    }
    return lines;
}

int parse_int(std::string_view s, const char* what) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error(std::string("bad integer for ") + what + ": '" + std::string(s) + "'");
    return v;
}

std::uint64_t parse_u64(std::string_view s, const char* what) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error(std::string("bad integer for ") + what + ": '" + std::string(s) + "'");
    return v;
}

const char* outcome_name(ProblemOutcome o) {
    switch (o) {
        case ProblemOutcome::TrueConsensus: return "true_consensus";
        case ProblemOutcome::FalseConsensus: return "false_consensus";
        case ProblemOutcome::Polarized: return "polarized";
        case ProblemOutcome::Unclassified: return "unclassified";
    }
    return "?";
}

ProblemOutcome outcome_from_name(std::string_view s) {
    if (s == "true_consensus") return ProblemOutcome::TrueConsensus;
    if (s == "false_consensus") return ProblemOutcome::FalseConsensus;
    if (s == "polarized") return ProblemOutcome::Polarized;
    if (s == "unclassified") return ProblemOutcome::Unclassified;
    throw std::runtime_error("bad outcome label: '" + std::string(s) + "'");
}

bool all_polarized(const RunResult& r) {
    if (!r.outcome.resolved) return false;
    for (auto o : r.outcome.per_problem)
        if (o != ProblemOutcome::Polarized) return false;
    return true;
}

} // namespace

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("bad number: '" + std::string(s) + "'");
    return v;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    if (quoted) throw std::runtime_error("unterminated quote in CSV line");
    fields.push_back(std::move(current));
    return fields;
}

std::string summary_row_csv(const metrics::SweepSummaryRow& row) {
    const auto& c = row.config;
    std::string out;
    out += std::to_string(c.num_agents);
    out += ',';
    out += std::to_string(c.pulls_per_round);
    out += ',';
    out += format_double(c.epsilon);
    out += ',';
    out += format_double(c.mistrust);
    out += ',';
    out += std::to_string(c.num_problems);
    out += ',';
    out += to_string(c.update_mode);
    out += ',';
    out += to_string(c.experiment_mode);
    out += ',';
    out += std::to_string(row.runs);
    out += ',';
    out += format_double(row.unresolved_frac);
    out += ',';
    out += format_double(row.frac_true_consensus);
    out += ',';
    out += format_double(row.frac_false_consensus);
    out += ',';
    out += format_double(row.frac_mixed_consensus);
    out += ',';
    out += format_double(row.frac_some_polarized);
    out += ',';
    out += format_double(row.frac_all_polarized);
    for (int p = 0; p < 3; ++p) {
        out += ',';
        if (p < c.num_problems) {
            const auto& f = row.per_problem[static_cast<std::size_t>(p)];
            out += format_double(f.true_consensus);
            out += ',';
            out += format_double(f.false_consensus);
            out += ',';
            out += format_double(f.polarized);
        } else {
            out += ",,";
        }
    }
    out += ',';
    if (row.mean_abs_corr_all) out += format_double(*row.mean_abs_corr_all);
    out += ',';
    if (row.mean_abs_corr_polarized) out += format_double(*row.mean_abs_corr_polarized);
    out += ',';
    out += format_double(row.mean_true_fraction);
    return out;
}

std::vector<metrics::SweepSummaryRow> read_summary_csv(const std::filesystem::path& path) {
    const auto lines = split_lines(read_text_file(path));
    if (lines.empty()) throw std::runtime_error(path.string() + ": empty summary file");

    const auto expected = split_csv_line(kSummaryHeader);
    const auto actual = split_csv_line(lines.front());
    if (actual != expected) {
        std::string missing, unexpected;
        for (const auto& col : expected)
            if (std::find(actual.begin(), actual.end(), col) == actual.end())
                missing += (missing.empty() ? "" : ", ") + col;
        for (const auto& col : actual)
            if (std::find(expected.begin(), expected.end(), col) == expected.end())
                unexpected += (unexpected.empty() ? "" : ", ") + col;
        std::string msg = path.string() + ": summary schema mismatch";
        if (!missing.empty()) msg += "; missing columns: " + missing;
        if (!unexpected.empty()) msg += "; unexpected columns: " + unexpected;
        if (missing.empty() && unexpected.empty()) msg += "; columns out of order";
        throw std::runtime_error(msg);
    }

    std::vector<metrics::SweepSummaryRow> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const auto f = split_csv_line(lines[li]);
        if (f.size() != expected.size())
            throw std::runtime_error(path.string() + ": line " + std::to_string(li + 1) +
                                     " has " + std::to_string(f.size()) + " fields, expected " +
                                     std::to_string(expected.size()));
        metrics::SweepSummaryRow row;
        row.config.num_agents = parse_int(f[0], "N");
        row.config.pulls_per_round = parse_int(f[1], "n");
        row.config.epsilon = parse_double(f[2]);
        row.config.mistrust = parse_double(f[3]);
        row.config.num_problems = parse_int(f[4], "problems");
        row.config.update_mode = update_mode_from_string(f[5]);
        row.config.experiment_mode = experiment_mode_from_string(f[6]);
        row.runs = parse_int(f[7], "runs");
        row.unresolved_frac = parse_double(f[8]);
        row.frac_true_consensus = parse_double(f[9]);
        row.frac_false_consensus = parse_double(f[10]);
        row.frac_mixed_consensus = parse_double(f[11]);
        row.frac_some_polarized = parse_double(f[12]);
        row.frac_all_polarized = parse_double(f[13]);
        row.per_problem.resize(static_cast<std::size_t>(row.config.num_problems));
        for (int p = 0; p < row.config.num_problems; ++p) {
            auto& pp = row.per_problem[static_cast<std::size_t>(p)];
            pp.true_consensus = parse_double(f[14 + 3 * static_cast<std::size_t>(p)]);
            pp.false_consensus = parse_double(f[15 + 3 * static_cast<std::size_t>(p)]);
            pp.polarized = parse_double(f[16 + 3 * static_cast<std::size_t>(p)]);
        }
        if (!f[23].empty()) row.mean_abs_corr_all = parse_double(f[23]);
        if (!f[24].empty()) row.mean_abs_corr_polarized = parse_double(f[24]);
        row.mean_true_fraction = parse_double(f[25]);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string run_record_csv(int combo_index, int run_index, const RunResult& result,
                           bool include_beliefs) {
    std::string out;
    out += std::to_string(combo_index);
    out += ',';
    out += std::to_string(run_index);
    out += ',';
    out += std::to_string(result.seed);
    out += ',';
    out += std::to_string(result.rounds);
    out += ',';
    out += result.outcome.resolved ? '1' : '0';
    for (int p = 0; p < 3; ++p) {
        out += ',';
        if (p < static_cast<int>(result.outcome.per_problem.size()))
            out += outcome_name(result.outcome.per_problem[static_cast<std::size_t>(p)]);
    }
    out += ',';
    out += format_double(result.abs_correlation);
    out += ',';
    if (all_polarized(result)) out += format_double(result.abs_correlation);
    out += ',';
    out += format_double(result.true_belief_fraction);
    for (int p = 0; p < 3; ++p) {
        out += ',';
        if (p < static_cast<int>(result.per_problem_true_fraction.size()))
            out += format_double(result.per_problem_true_fraction[static_cast<std::size_t>(p)]);
    }
    out += ',';
    if (include_beliefs) {
        std::string beliefs;
        for (std::size_t a = 0; a < result.final_beliefs.size(); ++a) {
            if (a) beliefs += '|';
            for (std::size_t p = 0; p < result.final_beliefs[a].size(); ++p) {
                if (p) beliefs += ';';
                beliefs += format_double(result.final_beliefs[a][p]);
            }
        }
        out += csv_escape(beliefs);
    }
    return out;
}

RunRecordData parse_run_record(std::string_view line) {
    const auto f = split_csv_line(line);
    const auto expected = split_csv_line(kRunRecordHeader);
    if (f.size() != expected.size())
        throw std::runtime_error("run record has " + std::to_string(f.size()) + " fields, expected " +
                                 std::to_string(expected.size()));
    RunRecordData rec;
    rec.combo_index = parse_int(f[0], "combo_index");
    rec.run_index = parse_int(f[1], "run_index");
    rec.result.seed = parse_u64(f[2], "seed");
    rec.result.rounds = parse_int(f[3], "rounds");
    if (f[4] != "0" && f[4] != "1") throw std::runtime_error("bad resolved flag: '" + f[4] + "'");
    rec.result.outcome.resolved = f[4] == "1";
    for (int p = 0; p < 3; ++p) {
        const auto& cell = f[5 + static_cast<std::size_t>(p)];
        if (!cell.empty()) rec.result.outcome.per_problem.push_back(outcome_from_name(cell));
    }
    rec.result.abs_correlation = parse_double(f[8]);
    if (!f[9].empty() && parse_double(f[9]) != rec.result.abs_correlation)
        throw std::runtime_error("run record: inconsistent correlation fields");
    rec.result.true_belief_fraction = parse_double(f[10]);
    for (int p = 0; p < 3; ++p) {
        const auto& cell = f[11 + static_cast<std::size_t>(p)];
        if (!cell.empty()) rec.result.per_problem_true_fraction.push_back(parse_double(cell));
    }
    if (!f[14].empty()) {
        std::string_view rest = f[14];
        while (!rest.empty()) {
            const std::size_t bar = rest.find('|');
            std::string_view agent = rest.substr(0, bar);
            std::vector<double> beliefs;
            while (!agent.empty()) {
                const std::size_t semi = agent.find(';');
                beliefs.push_back(parse_double(agent.substr(0, semi)));
                if (semi == std::string_view::npos) break;
                agent.remove_prefix(semi + 1);
            }
            rec.result.final_beliefs.push_back(std::move(beliefs));
            if (bar == std::string_view::npos) break;
            rest.remove_prefix(bar + 1);
        }
    }
    return rec;
}

std::vector<RunRecordData> read_run_records(const std::filesystem::path& path) {
    const auto lines = split_lines(read_text_file(path));
    if (lines.empty()) return {};
    if (lines.front() != kRunRecordHeader)
        throw std::runtime_error(path.string() + ": unexpected run-record header");
    std::vector<RunRecordData> records;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        try {
            records.push_back(parse_run_record(lines[li]));
        } catch (const std::exception& e) {
            if (li + 1 == lines.size()) break; // interrupted trailing write
            throw std::runtime_error(path.string() + ": line " + std::to_string(li + 1) + ": " + e.what());
        }
    }
    return records;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

nlohmann::ordered_json model_config_json(const ModelConfig& config) {
    nlohmann::ordered_json j;
    j["N"] = config.num_agents;
    j["n"] = config.pulls_per_round;
    j["epsilon"] = config.epsilon;
    j["m"] = config.mistrust;
    j["problems"] = config.num_problems;
    j["update_mode"] = to_string(config.update_mode);
    j["experiment_mode"] = to_string(config.experiment_mode);
    j["max_rounds"] = config.max_rounds;
    j["stability_window"] = config.stability_window;
    j["true_threshold"] = config.true_threshold;
    j["low_threshold_anti"] = config.low_threshold_anti;
    j["false_threshold"] = config.false_threshold;
    return j;
}

nlohmann::ordered_json sweep_config_json(const sweep::SweepConfig& config, bool save_runs) {
    nlohmann::ordered_json j;
    j["N"] = config.num_agents;
    j["n"] = config.pulls_per_round;
    j["epsilon"] = config.epsilon;
    j["m"] = config.mistrust;
    j["problems"] = config.num_problems;
    std::vector<std::string> updates, experiments;
    for (auto u : config.update_modes) updates.emplace_back(to_string(u));
    for (auto e : config.experiment_modes) experiments.emplace_back(to_string(e));
    j["update_mode"] = updates;
    j["experiment_mode"] = experiments;
    j["runs_per_combo"] = config.runs_per_combo;
    j["base_seed"] = config.base_seed;
    j["max_rounds"] = config.max_rounds;
    j["stability_window"] = config.stability_window;
    j["true_threshold"] = config.true_threshold;
    j["low_threshold_anti"] = config.low_threshold_anti;
    j["false_threshold"] = config.false_threshold;
    j["save_runs"] = save_runs;
    return j;
}

} // namespace factions::io
