#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fadeopt/baselines.hpp"
#include "fadeopt/marl.hpp"
#include "fadeopt/space.hpp"

namespace fadeopt {

struct ObjectiveSpec {
    std::string name;
    double target = 0.0;
};

struct ForestModelConfig {
    std::string data_path;
    std::size_t trees = 100;
    std::size_t max_depth = 8;
    std::size_t min_leaf = 1;
};

struct RunConfig {
    std::uint64_t seed = 1;
    std::vector<ParameterSpec> space;
    std::vector<ObjectiveSpec> objectives;
    std::string model_type = "synthetic";  // "synthetic" or "forest"
    std::optional<ForestModelConfig> forest;
    TrainingSettings training;
    Nsga2Settings nsga2;
    MopsoSettings mopso;
};

// The shipped defaults: the four-variable ozonation grid, the case-study
// targets, and the default training hyperparameters.
RunConfig default_config();

// Strict parse: unknown keys anywhere are a hard error.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

ParameterSpace space_from_config(const RunConfig& config);
std::vector<double> targets_from_config(const RunConfig& config);
std::vector<std::string> objective_names_from_config(const RunConfig& config);

}  // namespace fadeopt
