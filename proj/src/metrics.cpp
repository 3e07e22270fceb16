#include "factions/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace factions::metrics {

double pearson_abs(std::span<const int> x, std::span<const int> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("pearson_abs: length mismatch, " + std::to_string(x.size()) +
                                    " vs " + std::to_string(y.size()));
    if (x.size() < 2) throw std::invalid_argument("pearson_abs: need at least 2 entries");

    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += static_cast<double>(x[i]);
        sy += static_cast<double>(y[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = static_cast<double>(x[i]) - mx;
        const double dy = static_cast<double>(y[i]) - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    const double r = std::abs(sxy / (std::sqrt(sxx) * std::sqrt(syy)));
    return r > 1.0 ? 1.0 : r; // rounding can push perfect correlation past 1

}

double multi_correlation(const std::vector<std::vector<int>>& vectors) {
    if (vectors.size() < 2) throw std::invalid_argument("multi_correlation: need at least 2 vectors");
    double sum = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            sum += pearson_abs(vectors[i], vectors[j]);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

std::vector<std::vector<int>> binary_beliefs(const std::vector<std::vector<double>>& beliefs,
                                             double true_threshold) {
    if (beliefs.empty()) return {};
    const std::size_t problems = beliefs.front().size();
    std::vector<std::vector<int>> out(problems, std::vector<int>(beliefs.size(), 0));
    for (std::size_t a = 0; a < beliefs.size(); ++a)
        for (std::size_t p = 0; p < problems; ++p)
            out[p][a] = beliefs[a][p] >= true_threshold ? 1 : 0;
    return out;
}

double true_belief_fraction(const std::vector<std::vector<double>>& beliefs, double true_threshold,
                            std::span<const int> problems) {
    if (problems.empty()) throw std::invalid_argument("true_belief_fraction: empty problem subset");
    if (beliefs.empty()) throw std::invalid_argument("true_belief_fraction: empty population");
    long held = 0;
    for (const auto& agent : beliefs)
        for (int p : problems)
            if (agent.at(static_cast<std::size_t>(p)) >= true_threshold) ++held;
    return static_cast<double>(held) /
           (static_cast<double>(beliefs.size()) * static_cast<double>(problems.size()));
}

SweepSummaryRow aggregate_runs(std::span<const RunResult> results) {
    if (results.empty()) throw std::invalid_argument("aggregate_runs: empty input");
    const ModelConfig& cfg = results.front().config;
    for (const auto& r : results)
        if (!r.config.same_combo(cfg))
            throw std::invalid_argument("aggregate_runs: results span multiple parameter combinations");

    SweepSummaryRow row;
    row.config = cfg;
    row.runs = static_cast<int>(results.size());
    row.per_problem.assign(static_cast<std::size_t>(cfg.num_problems), PerProblemFractions{});

    int unresolved = 0, all_true = 0, all_false = 0, mixed_consensus = 0;
    int some_polarized = 0, all_polarized = 0;
    double corr_all_sum = 0.0;
    int corr_all_count = 0;
    double corr_pol_sum = 0.0;
    int corr_pol_count = 0;
    double true_frac_sum = 0.0;

    for (const auto& r : results) {
        if (cfg.experiment_mode == ExperimentMode::Prepolarized)
            true_frac_sum += r.per_problem_true_fraction.at(1);
        else
            true_frac_sum += r.true_belief_fraction;

        if (!r.outcome.resolved) {
            ++unresolved;
            continue;
        }
        int n_true = 0, n_false = 0, n_pol = 0;
        for (std::size_t p = 0; p < r.outcome.per_problem.size(); ++p) {
            switch (r.outcome.per_problem[p]) {
                case ProblemOutcome::TrueConsensus: ++n_true; row.per_problem[p].true_consensus += 1.0; break;
                case ProblemOutcome::FalseConsensus: ++n_false; row.per_problem[p].false_consensus += 1.0; break;
                case ProblemOutcome::Polarized: ++n_pol; row.per_problem[p].polarized += 1.0; break;
                case ProblemOutcome::Unclassified: break;
            }
        }
        const int problems = cfg.num_problems;
        if (n_pol == problems) ++all_polarized;
        else if (n_pol > 0) ++some_polarized;
        else if (n_true == problems) ++all_true;
        else if (n_false == problems) ++all_false;
        else ++mixed_consensus;

        corr_all_sum += r.abs_correlation;
        ++corr_all_count;
        if (n_pol == problems) {
            corr_pol_sum += r.abs_correlation;
            ++corr_pol_count;
        }
    }

    const double n = static_cast<double>(row.runs);
    row.unresolved_frac = unresolved / n;
    row.frac_true_consensus = all_true / n;
    row.frac_false_consensus = all_false / n;
    row.frac_mixed_consensus = mixed_consensus / n;
    row.frac_some_polarized = some_polarized / n;
    row.frac_all_polarized = all_polarized / n;
    for (auto& f : row.per_problem) {
        f.true_consensus /= n;
        f.false_consensus /= n;
        f.polarized /= n;
    }
    if (corr_all_count > 0) row.mean_abs_corr_all = corr_all_sum / corr_all_count;
    if (corr_pol_count > 0) row.mean_abs_corr_polarized = corr_pol_sum / corr_pol_count;
    row.mean_true_fraction = true_frac_sum / n;
    return row;
}

} // namespace factions::metrics
