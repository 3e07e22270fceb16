#include "factions/engine.hpp"

#include <algorithm>
#include <cmath>

#include "factions/metrics.hpp"

namespace factions {

namespace {

double low_mark(const ModelConfig& config) {
    return config.update_mode == UpdateMode::Anti ? config.low_threshold_anti : config.false_threshold;
}

// 2 = high camp, 0 = low camp, 1 = neither.
std::vector<signed char> camp_matrix(const Population& population, const ModelConfig& config) {
    const double low = low_mark(config);
    std::vector<signed char> camps;
    camps.reserve(population.size() * static_cast<std::size_t>(config.num_problems));
    for (const auto& agent : population)
        for (double c : agent.beliefs)
            camps.push_back(c >= config.true_threshold ? 2 : (c < low ? 0 : 1));
    return camps;
}

double pair_distance(const AgentState& a, const AgentState& b, int problem, const ModelConfig& config) {
    if (config.experiment_mode == ExperimentMode::IndependentBaseline)
        return std::abs(a.beliefs[static_cast<std::size_t>(problem)] -
                        b.beliefs[static_cast<std::size_t>(problem)]);
    return prob::belief_distance(a.beliefs, b.beliefs);
}

} // namespace

LikelihoodTable make_likelihood_table(const ModelConfig& config) {
    LikelihoodTable table;
    const int n = config.pulls_per_round;
    table.good.resize(static_cast<std::size_t>(n) + 1);
    table.bad.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        table.good[static_cast<std::size_t>(k)] = prob::binomial_pmf(k, n, 0.5 + config.epsilon);
        table.bad[static_cast<std::size_t>(k)] = prob::binomial_pmf(k, n, 0.5 - config.epsilon);
    }
    return table;
}

Population init_population(const ModelConfig& config, Rng& rng) {
    Population population(static_cast<std::size_t>(config.num_agents));
    const bool prepolarized = config.experiment_mode == ExperimentMode::Prepolarized;
    for (int i = 0; i < config.num_agents; ++i) {
        auto& agent = population[static_cast<std::size_t>(i)];
        agent.id = i;
        agent.beliefs.resize(static_cast<std::size_t>(config.num_problems));
        for (int p = 0; p < config.num_problems; ++p) {
            if (prepolarized && p == 0)
                agent.beliefs[0] = i < config.num_agents / 2 ? 1.0 : 0.0;
            else
                agent.beliefs[static_cast<std::size_t>(p)] = rng.uniform_open01();
        }
    }
    return population;
}

std::vector<EvidenceBatch> generate_evidence(const Population& population, const ModelConfig& config,
                                             Rng& rng) {
    std::vector<EvidenceBatch> evidence;
    const double success_rate = 0.5 + config.epsilon; // B really is better
    for (const auto& agent : population) {
        for (int p = 0; p < config.num_problems; ++p) {
            if (choose_action(agent.beliefs[static_cast<std::size_t>(p)]) != Action::B) continue;
            const int k = rng.binomial(config.pulls_per_round, success_rate);
            evidence.push_back({agent.id, p, config.pulls_per_round, k});
        }
    }
    return evidence;
}

Population update_round(const Population& population, std::span<const EvidenceBatch> evidence,
                        const ModelConfig& config, const LikelihoodTable& table) {
    Population next = population;
    for (auto& agent : next) {
        const AgentState& self = population[static_cast<std::size_t>(agent.id)];
        for (int p = 0; p < config.num_problems; ++p) {
            double credence = self.beliefs[static_cast<std::size_t>(p)];
            // Own result first, treated as certain.
            for (const auto& batch : evidence) {
                if (batch.problem != p || batch.source != agent.id) continue;
                const std::size_t k = static_cast<std::size_t>(batch.successes);
                credence = prob::bayes_posterior_lp(credence, table.good[k], table.bad[k]);
            }
            // Neighbors in ascending source id, weighted by trust at the
            // round-start distance.
            for (const auto& batch : evidence) {
                if (batch.problem != p || batch.source == agent.id) continue;
                const std::size_t k = static_cast<std::size_t>(batch.successes);
                const double p_e = prob::prior_prob_evidence_lp(credence, table.good[k], table.bad[k]);
                const double d =
                    pair_distance(self, population[static_cast<std::size_t>(batch.source)], p, config);
                const double pf = prob::trust_in_evidence(d, config.mistrust, p_e, config.update_mode);
                if (pf == p_e) continue; // Jeffrey update at pf = P(E) is the identity
                credence = prob::jeffrey_posterior_lp(credence, table.good[k], table.bad[k], pf);
            }
            agent.beliefs[static_cast<std::size_t>(p)] = credence;
        }
    }
    return next;
}

Population update_round(const Population& population, std::span<const EvidenceBatch> evidence,
                        const ModelConfig& config) {
    return update_round(population, evidence, config, make_likelihood_table(config));
}

std::vector<ProblemOutcome> classify_state(const Population& population, const ModelConfig& config) {
    std::vector<ProblemOutcome> labels(static_cast<std::size_t>(config.num_problems),
                                       ProblemOutcome::Unclassified);
    const double low = low_mark(config);
    for (int p = 0; p < config.num_problems; ++p) {
        int high = 0, below_false = 0, below_low = 0;
        for (const auto& agent : population) {
            const double c = agent.beliefs[static_cast<std::size_t>(p)];
            if (c >= config.true_threshold) ++high;
            if (c < config.false_threshold) ++below_false;
            if (c < low) ++below_low;
        }
        const int n = static_cast<int>(population.size());
        auto& label = labels[static_cast<std::size_t>(p)];
        if (high == n) label = ProblemOutcome::TrueConsensus;
        else if (below_false == n) label = ProblemOutcome::FalseConsensus;
        else if (high + below_low == n && high > 0 && below_low > 0) label = ProblemOutcome::Polarized;
    }
    return labels;
}

bool is_stable(const Population& population, const ModelConfig& config) {
    const auto labels = classify_state(population, config);
    const double low = low_mark(config);
    for (int p = 0; p < config.num_problems; ++p) {
        const auto label = labels[static_cast<std::size_t>(p)];
        if (label == ProblemOutcome::Unclassified) return false;
        if (label != ProblemOutcome::Polarized) continue;
        if (config.update_mode == UpdateMode::Anti) {
            // Anti-updating drives the low camp towards 0; settled once below
            // the low mark.
            for (const auto& agent : population) {
                const double c = agent.beliefs[static_cast<std::size_t>(p)];
                if (c < config.true_threshold && c > config.low_threshold_anti) return false;
            }
        } else {
            // A low-camp agent is out of reach once the trust floor bites for
            // every high-camp source, or once its credence is an absorbing 0.
            for (const auto& lo : population) {
                const double c_lo = lo.beliefs[static_cast<std::size_t>(p)];
                if (c_lo >= low) continue;
                if (c_lo == 0.0) continue;
                for (const auto& hi : population) {
                    if (hi.beliefs[static_cast<std::size_t>(p)] < config.true_threshold) continue;
                    if (pair_distance(lo, hi, p, config) * config.mistrust < 1.0) return false;
                }
            }
        }
    }
    return true;
}

RunResult run_simulation(const ModelConfig& config, std::uint64_t seed, const RoundObserver& observer) {
    config.validate();
    Rng rng(seed);
    Population population = init_population(config, rng);
    const LikelihoodTable table = make_likelihood_table(config);
    if (observer) observer(0, population);

    std::vector<signed char> settled_camps;
    int stable_streak = 0;
    int rounds = 0;
    bool resolved = false;

    while (rounds < config.max_rounds) {
        const auto evidence = generate_evidence(population, config, rng);
        population = update_round(population, evidence, config, table);
        ++rounds;
        if (observer) observer(rounds, population);

        if (is_stable(population, config)) {
            auto camps = camp_matrix(population, config);
            if (stable_streak > 0 && camps == settled_camps) ++stable_streak;
            else stable_streak = 1;
            settled_camps = std::move(camps);
            if (stable_streak >= config.stability_window) {
                resolved = true;
                break;
            }
        } else {
            stable_streak = 0;
        }
    }

    RunResult result;
    result.config = config;
    result.seed = seed;
    result.rounds = rounds;
    result.final_beliefs.reserve(population.size());
    for (const auto& agent : population) result.final_beliefs.push_back(agent.beliefs);
    result.outcome.per_problem = classify_state(population, config);
    result.outcome.resolved = resolved;

    if (config.num_problems >= 2) {
        result.abs_correlation =
            metrics::multi_correlation(metrics::binary_beliefs(result.final_beliefs, config.true_threshold));
    }
    std::vector<int> all_problems(static_cast<std::size_t>(config.num_problems));
    for (int p = 0; p < config.num_problems; ++p) all_problems[static_cast<std::size_t>(p)] = p;
    result.true_belief_fraction =
        metrics::true_belief_fraction(result.final_beliefs, config.true_threshold, all_problems);
    result.per_problem_true_fraction.resize(static_cast<std::size_t>(config.num_problems));
    for (int p = 0; p < config.num_problems; ++p) {
        const int single[1] = {p};
        result.per_problem_true_fraction[static_cast<std::size_t>(p)] =
            metrics::true_belief_fraction(result.final_beliefs, config.true_threshold, single);
    }
    return result;
}

} // namespace factions
