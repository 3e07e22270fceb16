#pragma once
// Model configuration shared by the engine, the sweep harness and the CLI.

#include <string>

#include "factions/prob.hpp"

namespace factions {

using prob::UpdateMode;

enum class ExperimentMode {
    Coevolve,            // all beliefs random, trust from full belief-space distance
    Prepolarized,        // problem 1 pinned to a half/half 0-1 split, trust full-dimensional
    IndependentBaseline, // all beliefs random, trust from per-problem 1D distance
};

struct ModelConfig {
    int num_agents = 0;      // N
    int pulls_per_round = 0; // n, draws on the chosen arm per round
    double epsilon = 0.0;    // payoff edge of the better arm
    double mistrust = 0.0;   // m, slope of trust decay with belief distance
    int num_problems = 2;
    UpdateMode update_mode = UpdateMode::Anti;
    ExperimentMode experiment_mode = ExperimentMode::Coevolve;
    int max_rounds = 10000;
    int stability_window = 10; // consecutive stable rounds required to settle
    double true_threshold = 0.99;
    double low_threshold_anti = 0.01;
    double false_threshold = 0.5;

    // Throws std::invalid_argument naming the key, the value and the
    // accepted range on the first violated constraint.
    void validate() const;

    // Parameter-combination identity: the seven swept fields only.
    bool same_combo(const ModelConfig& other) const;
};

const char* to_string(UpdateMode mode);
const char* to_string(ExperimentMode mode);
UpdateMode update_mode_from_string(const std::string& s);
ExperimentMode experiment_mode_from_string(const std::string& s);

} // namespace factions
