#pragma once
// File formats: locale-independent CSV (RFC-4180-style quoting), run-record
// and summary schemas, JSON metadata, and atomic output promotion.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "factions/metrics.hpp"
#include "factions/sweep.hpp"

namespace factions::io {

// Shortest round-trip decimal form; parsing it back recovers the exact bits.
std::string format_double(double v);
double parse_double(std::string_view s);

std::string csv_escape(std::string_view field);
std::vector<std::string> split_csv_line(std::string_view line);

inline constexpr std::string_view kSummaryHeader =
    "N,n,epsilon,m,problems,update_mode,experiment_mode,runs,unresolved_frac,"
    "frac_true_consensus,frac_false_consensus,frac_mixed_consensus,frac_some_polarized,"
    "frac_all_polarized,frac_true_p1,frac_false_p1,frac_polarized_p1,frac_true_p2,"
    "frac_false_p2,frac_polarized_p2,frac_true_p3,frac_false_p3,frac_polarized_p3,"
    "corr_all,corr_polarized,true_frac";

std::string summary_row_csv(const metrics::SweepSummaryRow& row);
std::vector<metrics::SweepSummaryRow> read_summary_csv(const std::filesystem::path& path);

inline constexpr std::string_view kRunRecordHeader =
    "combo_index,run_index,seed,rounds,resolved,outcome_p1,outcome_p2,outcome_p3,"
    "abs_corr_all,abs_corr_polarized,true_frac,true_frac_p1,true_frac_p2,true_frac_p3,"
    "final_beliefs";

std::string run_record_csv(int combo_index, int run_index, const RunResult& result,
                           bool include_beliefs);

// Parsed record; result.config is left default and must be filled from the
// sweep grid before aggregation.
struct RunRecordData {
    int combo_index = 0;
    int run_index = 0;
    RunResult result;
};

RunRecordData parse_run_record(std::string_view line);

// Reads an append-only record log. A truncated final line (interrupted
// write) is dropped; corruption anywhere else raises.
std::vector<RunRecordData> read_run_records(const std::filesystem::path& path);

// Writes to a sibling temp file and renames into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

nlohmann::ordered_json model_config_json(const ModelConfig& config);
nlohmann::ordered_json sweep_config_json(const sweep::SweepConfig& config, bool save_runs);

} // namespace factions::io
