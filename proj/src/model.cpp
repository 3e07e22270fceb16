#include "factions/model.hpp"

#include <stdexcept>

namespace factions {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& value, const std::string& range) {
    throw std::invalid_argument(key + ": " + value + " is outside the accepted range " + range);
}

} // namespace

void ModelConfig::validate() const {
    if (num_agents < 1) fail("N", std::to_string(num_agents), "[1, ...)");
    if (pulls_per_round < 1) fail("n", std::to_string(pulls_per_round), "[1, ...)");
    if (!(epsilon > 0.0 && epsilon < 0.5)) fail("epsilon", std::to_string(epsilon), "(0, 0.5)");
    if (!(mistrust >= 0.0)) fail("m", std::to_string(mistrust), "[0, ...)");
    if (num_problems < 1 || num_problems > 3) fail("problems", std::to_string(num_problems), "{1, 2, 3}");
    if (max_rounds < 1) fail("max_rounds", std::to_string(max_rounds), "[1, ...)");
    if (stability_window < 1) fail("stability_window", std::to_string(stability_window), "[1, ...)");
    if (!(true_threshold > 0.5 && true_threshold <= 1.0))
        fail("true_threshold", std::to_string(true_threshold), "(0.5, 1]");
    if (!(low_threshold_anti > 0.0 && low_threshold_anti < 0.5))
        fail("low_threshold_anti", std::to_string(low_threshold_anti), "(0, 0.5)");
    if (!(false_threshold > 0.0 && false_threshold <= 0.5))
        fail("false_threshold", std::to_string(false_threshold), "(0, 0.5]");
    if (experiment_mode == ExperimentMode::Prepolarized) {
        if (num_problems < 2)
            throw std::invalid_argument("problems: prepolarized mode requires at least 2 problems, got " +
                                        std::to_string(num_problems));
        if (num_agents % 2 != 0)
            throw std::invalid_argument("N: prepolarized mode requires an even number of agents, got " +
                                        std::to_string(num_agents));
    }
}

bool ModelConfig::same_combo(const ModelConfig& other) const {
    return num_agents == other.num_agents && pulls_per_round == other.pulls_per_round &&
           epsilon == other.epsilon && mistrust == other.mistrust &&
           num_problems == other.num_problems && update_mode == other.update_mode &&
           experiment_mode == other.experiment_mode;
}

const char* to_string(UpdateMode mode) {
    return mode == UpdateMode::Anti ? "anti" : "no_anti";
}

const char* to_string(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::Coevolve: return "coevolve";
        case ExperimentMode::Prepolarized: return "prepolarized";
        case ExperimentMode::IndependentBaseline: return "independent_baseline";
    }
    return "?";
}

UpdateMode update_mode_from_string(const std::string& s) {
    if (s == "anti") return UpdateMode::Anti;
    if (s == "no_anti") return UpdateMode::NoAnti;
    throw std::invalid_argument("update_mode: '" + s + "' is not one of {anti, no_anti}");
}

ExperimentMode experiment_mode_from_string(const std::string& s) {
    if (s == "coevolve") return ExperimentMode::Coevolve;
    if (s == "prepolarized") return ExperimentMode::Prepolarized;
    if (s == "independent_baseline") return ExperimentMode::IndependentBaseline;
    throw std::invalid_argument("experiment_mode: '" + s +
                                "' is not one of {coevolve, prepolarized, independent_baseline}");
}

} // namespace factions
