#include "fadeopt/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>

namespace fadeopt {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw std::invalid_argument("unknown config key '" + key + "' in " + where);
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

RunConfig default_config() {
    RunConfig config;
    config.seed = 1;
    config.space = {
        {"water_content", 0.0, 150.0, 50.0},
        {"temperature", 0.0, 100.0, 10.0},
        {"ph", 1.0, 14.0, 1.0},
        {"time", 1.0, 60.0, 1.0},
    };
    config.objectives = {
        {"k_s", 0.81},
        {"L_star", 15.76},
        {"a_star", -20.84},
        {"b_star", -70.79},
    };
    // TrainingSettings defaults already carry F=5, D=2000, alpha=0.01,
    // gamma=0.9, increment=0.001, eps_max=0.9, E=1, N=5000.
    // Baseline budgets: 50 + 99*50 = 5000 evaluations, matching N.
    config.nsga2.population = 50;
    config.nsga2.generations = 99;
    config.mopso.swarm = 50;
    config.mopso.iterations = 99;
    return config;
}

RunConfig parse_config(const std::string& json_text) {
    json j = json::parse(json_text);
    RunConfig config = default_config();

    require_keys(j, "config root",
                 {"seed", "space", "objectives", "model", "dqn", "schedule", "loop", "nsga2",
                  "mopso"});

    read_if(j, "seed", config.seed);

    if (j.contains("space")) {
        config.space.clear();
        for (const auto& entry : j.at("space")) {
            require_keys(entry, "space entry", {"name", "low", "high", "unit_step"});
            ParameterSpec spec;
            spec.name = entry.at("name").get<std::string>();
            spec.low = entry.at("low").get<double>();
            spec.high = entry.at("high").get<double>();
            spec.unit_step = entry.at("unit_step").get<double>();
            config.space.push_back(std::move(spec));
        }
    }

    if (j.contains("objectives")) {
        config.objectives.clear();
        for (const auto& entry : j.at("objectives")) {
            require_keys(entry, "objectives entry", {"name", "target"});
            config.objectives.push_back(
                {entry.at("name").get<std::string>(), entry.at("target").get<double>()});
        }
    }

    if (j.contains("model")) {
        const auto& m = j.at("model");
        require_keys(m, "model", {"type", "data", "trees", "max_depth", "min_leaf"});
        config.model_type = m.at("type").get<std::string>();
        if (config.model_type == "forest") {
            ForestModelConfig forest;
            forest.data_path = m.at("data").get<std::string>();
            read_if(m, "trees", forest.trees);
            read_if(m, "max_depth", forest.max_depth);
            read_if(m, "min_leaf", forest.min_leaf);
            config.forest = forest;
        } else if (config.model_type != "synthetic") {
            throw std::invalid_argument("model.type must be 'synthetic' or 'forest'");
        }
    }

    if (j.contains("dqn")) {
        const auto& d = j.at("dqn");
        require_keys(d, "dqn",
                     {"hidden", "warmup_steps", "sync_period", "buffer_capacity", "batch_size",
                      "learning_rate", "discount"});
        read_if(d, "hidden", config.training.hidden);
        read_if(d, "warmup_steps", config.training.warmup_steps);
        read_if(d, "sync_period", config.training.sync_period);
        read_if(d, "buffer_capacity", config.training.buffer_capacity);
        read_if(d, "batch_size", config.training.batch_size);
        read_if(d, "learning_rate", config.training.learning_rate);
        read_if(d, "discount", config.training.discount);
    }

    if (j.contains("schedule")) {
        const auto& s = j.at("schedule");
        require_keys(s, "schedule", {"epsilon_increment", "epsilon_max"});
        read_if(s, "epsilon_increment", config.training.epsilon_increment);
        read_if(s, "epsilon_max", config.training.epsilon_max);
    }

    if (j.contains("loop")) {
        const auto& l = j.at("loop");
        require_keys(l, "loop", {"episodes", "steps", "stop_threshold"});
        read_if(l, "episodes", config.training.episodes);
        read_if(l, "steps", config.training.steps_per_episode);
        if (l.contains("stop_threshold") && !l.at("stop_threshold").is_null())
            config.training.stop_threshold = l.at("stop_threshold").get<double>();
    }

    if (j.contains("nsga2")) {
        const auto& n = j.at("nsga2");
        require_keys(n, "nsga2", {"population", "generations", "p_crossover", "p_mutation"});
        read_if(n, "population", config.nsga2.population);
        read_if(n, "generations", config.nsga2.generations);
        read_if(n, "p_crossover", config.nsga2.p_crossover);
        read_if(n, "p_mutation", config.nsga2.p_mutation);
    }

    if (j.contains("mopso")) {
        const auto& m = j.at("mopso");
        require_keys(m, "mopso",
                     {"swarm", "iterations", "inertia", "c1", "c2", "archive_cap"});
        read_if(m, "swarm", config.mopso.swarm);
        read_if(m, "iterations", config.mopso.iterations);
        read_if(m, "inertia", config.mopso.inertia);
        read_if(m, "c1", config.mopso.c1);
        read_if(m, "c2", config.mopso.c2);
        read_if(m, "archive_cap", config.mopso.archive_cap);
    }

    // Validation beyond parsing.
    if (config.space.empty()) throw std::invalid_argument("config.space must be non-empty");
    if (config.objectives.empty())
        throw std::invalid_argument("config.objectives must be non-empty");
    if (config.training.discount < 0.0 || config.training.discount > 1.0)
        throw std::invalid_argument("dqn.discount must lie in [0, 1]");
    if (config.training.learning_rate <= 0.0)
        throw std::invalid_argument("dqn.learning_rate must be positive");
    if (config.training.episodes < 1 || config.training.steps_per_episode < 0)
        throw std::invalid_argument("loop.episodes must be >= 1 and loop.steps >= 0");
    if (config.training.batch_size < 1 || config.training.sync_period < 1)
        throw std::invalid_argument("dqn.batch_size and dqn.sync_period must be >= 1");
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string serialize_config(const RunConfig& config) {
    json j;
    j["seed"] = config.seed;
    j["space"] = json::array();
    for (const auto& s : config.space)
        j["space"].push_back(
            {{"name", s.name}, {"low", s.low}, {"high", s.high}, {"unit_step", s.unit_step}});
    j["objectives"] = json::array();
    for (const auto& o : config.objectives)
        j["objectives"].push_back({{"name", o.name}, {"target", o.target}});
    j["model"]["type"] = config.model_type;
    if (config.forest) {
        j["model"]["data"] = config.forest->data_path;
        j["model"]["trees"] = config.forest->trees;
        j["model"]["max_depth"] = config.forest->max_depth;
        j["model"]["min_leaf"] = config.forest->min_leaf;
    }
    j["dqn"] = {{"hidden", config.training.hidden},
                {"warmup_steps", config.training.warmup_steps},
                {"sync_period", config.training.sync_period},
                {"buffer_capacity", config.training.buffer_capacity},
                {"batch_size", config.training.batch_size},
                {"learning_rate", config.training.learning_rate},
                {"discount", config.training.discount}};
    j["schedule"] = {{"epsilon_increment", config.training.epsilon_increment},
                     {"epsilon_max", config.training.epsilon_max}};
    j["loop"] = {{"episodes", config.training.episodes},
                 {"steps", config.training.steps_per_episode}};
    if (config.training.stop_threshold)
        j["loop"]["stop_threshold"] = *config.training.stop_threshold;
    j["nsga2"] = {{"population", config.nsga2.population},
                  {"generations", config.nsga2.generations},
                  {"p_crossover", config.nsga2.p_crossover},
                  {"p_mutation", config.nsga2.p_mutation}};
    j["mopso"] = {{"swarm", config.mopso.swarm},
                  {"iterations", config.mopso.iterations},
                  {"inertia", config.mopso.inertia},
                  {"c1", config.mopso.c1},
                  {"c2", config.mopso.c2},
                  {"archive_cap", config.mopso.archive_cap}};
    return j.dump(2);
}

ParameterSpace space_from_config(const RunConfig& config) {
    return build_space(config.space);
}

std::vector<double> targets_from_config(const RunConfig& config) {
    std::vector<double> targets;
    for (const auto& o : config.objectives) targets.push_back(o.target);
    return targets;
}

std::vector<std::string> objective_names_from_config(const RunConfig& config) {
    std::vector<std::string> names;
    for (const auto& o : config.objectives) names.push_back(o.name);
    return names;
}

}  // namespace fadeopt
