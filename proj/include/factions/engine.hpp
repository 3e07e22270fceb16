#pragma once
// One simulation run: initialization, synchronous rounds of arm pulls and
// trust-weighted updating, stability detection and outcome classification.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "factions/model.hpp"
#include "factions/rng.hpp"

namespace factions {

struct AgentState {
    int id = 0;
    std::vector<double> beliefs; // one credence per problem
};

using Population = std::vector<AgentState>;

// One agent's report for one problem in one round.
struct EvidenceBatch {
    int source = 0;
    int problem = 0;
    int trials = 0;
    int successes = 0;
};

enum class ProblemOutcome { TrueConsensus, FalseConsensus, Polarized, Unclassified };

struct OutcomeLabel {
    std::vector<ProblemOutcome> per_problem; // final classification attempt
    bool resolved = false;                   // false: hit max_rounds before stabilizing
};

struct RunResult {
    ModelConfig config;
    std::uint64_t seed = 0;
    int rounds = 0;
    std::vector<std::vector<double>> final_beliefs; // [agent][problem]
    OutcomeLabel outcome;
    double abs_correlation = 0.0;      // mean pairwise |r| of final binary beliefs; 0 for one problem
    double true_belief_fraction = 0.0; // over all (agent, problem) pairs
    std::vector<double> per_problem_true_fraction;
};

enum class Action { A, B };

// B iff the agent thinks B is better; exact ties go to the established arm A.
inline Action choose_action(double credence) {
    return credence > 0.5 ? Action::B : Action::A;
}

// Binomial likelihoods of k successes under the two hypotheses about arm B,
// precomputed once per run.
struct LikelihoodTable {
    std::vector<double> good; // P(k | rate 0.5 + eps)
    std::vector<double> bad;  // P(k | rate 0.5 - eps)
};

LikelihoodTable make_likelihood_table(const ModelConfig& config);

// Draw order is part of the reproducibility contract: agents in id order,
// problems in index order, one uniform per random credence at init and
// n Bernoulli trials per B-pull during rounds.
Population init_population(const ModelConfig& config, Rng& rng);

std::vector<EvidenceBatch> generate_evidence(const Population& population, const ModelConfig& config,
                                             Rng& rng);

// Synchronous update: every agent starts from the round-start snapshot,
// conditions strictly on its own batch first, then Jeffrey-updates on the
// other batches in ascending source id. Trust distances are frozen at the
// round-start snapshot; the prior probability of each batch is taken at the
// agent's sequentially evolving credence.
Population update_round(const Population& population, std::span<const EvidenceBatch> evidence,
                        const ModelConfig& config, const LikelihoodTable& table);
Population update_round(const Population& population, std::span<const EvidenceBatch> evidence,
                        const ModelConfig& config);

std::vector<ProblemOutcome> classify_state(const Population& population, const ModelConfig& config);

// A state is stable when every problem classifies and no polarized problem
// leaves a low-camp agent open to influence from a high-camp agent.
bool is_stable(const Population& population, const ModelConfig& config);

// Called with (round, population) after initialization (round 0) and after
// every completed round.
using RoundObserver = std::function<void(int, const Population&)>;

RunResult run_simulation(const ModelConfig& config, std::uint64_t seed,
                         const RoundObserver& observer = {});

} // namespace factions
