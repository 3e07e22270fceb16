#pragma once
// Outcome statistics: correlation of final binary beliefs, true-belief
// fractions, and per-parameter-combination aggregation.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "factions/engine.hpp"

namespace factions::metrics {

// |Pearson r| between two equal-length binary belief vectors. Returns 0 when
// either vector is constant (agents entirely agree on that problem).
double pearson_abs(std::span<const int> x, std::span<const int> y);

// Mean of pearson_abs over all unordered pairs of problem vectors.
double multi_correlation(const std::vector<std::vector<int>>& vectors);

// One 0/1 vector per problem: entry 1 iff the agent's final credence clears
// the true-belief threshold.
std::vector<std::vector<int>> binary_beliefs(const std::vector<std::vector<double>>& beliefs,
                                             double true_threshold);

// Fraction of (agent, problem) pairs over the given problem indices holding
// the true belief.
double true_belief_fraction(const std::vector<std::vector<double>>& beliefs, double true_threshold,
                            std::span<const int> problems);

struct PerProblemFractions {
    double true_consensus = 0.0;
    double false_consensus = 0.0;
    double polarized = 0.0;
};

struct SweepSummaryRow {
    ModelConfig config;
    int runs = 0;
    double unresolved_frac = 0.0;
    // Joint taxonomy over resolved runs; together with unresolved_frac these
    // sum to 1.
    double frac_true_consensus = 0.0;  // true consensus on every problem
    double frac_false_consensus = 0.0; // false consensus on every problem
    double frac_mixed_consensus = 0.0; // consensus everywhere, outcomes mixed
    double frac_some_polarized = 0.0;  // polarized on some but not all problems
    double frac_all_polarized = 0.0;   // polarized on every problem
    std::vector<PerProblemFractions> per_problem; // size = num_problems, over all runs
    // Means over resolved runs / runs polarized on every problem; absent
    // (never 0) when the relevant set is empty.
    std::optional<double> mean_abs_corr_all;
    std::optional<double> mean_abs_corr_polarized;
    // Problem 2 only in prepolarized mode, all problems otherwise.
    double mean_true_fraction = 0.0;
};

// All results must share one parameter combination; empty input is rejected.
SweepSummaryRow aggregate_runs(std::span<const RunResult> results);

} // namespace factions::metrics
