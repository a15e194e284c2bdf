#include "fadeopt/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>

#include "fadeopt/csv.hpp"
#include "fadeopt/forest.hpp"
#include "fadeopt/marl.hpp"
#include "fadeopt/tabular.hpp"

namespace fadeopt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// A command owns its output directory exclusively while running.
class DirLock {
public:
    explicit DirLock(const fs::path& dir) : path_(dir / ".fadeopt.lock") {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (fs::exists(path_))
            throw std::runtime_error("output directory is locked by another run: " +
                                     path_.string());
        std::ofstream out(path_);
        if (!out) throw std::runtime_error("cannot create lock file: " + path_.string());
    }
    ~DirLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    fs::path path_;
};

RunConfig load_effective_config(const CommandOptions& options) {
    RunConfig config =
        options.config_path.empty() ? default_config() : load_config(options.config_path);
    if (options.has_seed_override) config.seed = options.seed_override;
    return config;
}

std::unique_ptr<ObjectiveModel> build_model(const RunConfig& config,
                                            const ParameterSpace& space) {
    if (config.model_type == "synthetic") {
        if (space.num_variables() != 4 || config.objectives.size() != 4)
            throw std::invalid_argument(
                "the synthetic model requires 4 variables and 4 objectives");
        return std::make_unique<SyntheticOzonationModel>();
    }
    const auto& fc = *config.forest;
    Dataset data = read_dataset_csv(fc.data_path, space.num_variables());
    if (data.output_names.size() != config.objectives.size())
        throw std::invalid_argument("dataset output count does not match config.objectives");
    return std::make_unique<ForestModel>(data, fc.trees, fc.max_depth, fc.min_leaf,
                                         sub_seed(config.seed, "forest"));
}

void write_summary(const fs::path& dir, const std::string& method, const RunConfig& config,
                   const StateVector& best_state, const std::vector<double>& predictions,
                   double summed_error) {
    json j;
    j["method"] = method;
    j["variables"] = json::array();
    for (std::size_t i = 0; i < config.space.size(); ++i)
        j["variables"].push_back(
            {{"name", config.space[i].name}, {"value", best_state.values[i]}});
    j["objectives"] = json::array();
    for (std::size_t i = 0; i < config.objectives.size(); ++i)
        j["objectives"].push_back({{"name", config.objectives[i].name},
                                   {"target", config.objectives[i].target},
                                   {"achieved", predictions[i]},
                                   {"abs_error",
                                    std::abs(predictions[i] - config.objectives[i].target)}});
    j["summed_error"] = summed_error;
    j["model"] = config.model_type;
    j["seed"] = config.seed;
    std::ofstream out(dir / "summary.json");
    if (!out) throw std::runtime_error("cannot write summary.json");
    out << j.dump(2) << '\n';
}

void print_best(const RunConfig& config, const StateVector& best_state,
                const std::vector<double>& predictions, double summed_error, bool quiet) {
    if (quiet) return;
    std::cout << "best solution:";
    for (std::size_t i = 0; i < config.space.size(); ++i)
        std::cout << ' ' << config.space[i].name << '=' << best_state.values[i];
    std::cout << '\n';
    for (std::size_t i = 0; i < config.objectives.size(); ++i)
        std::cout << "  " << config.objectives[i].name << ": achieved " << predictions[i]
                  << " target " << config.objectives[i].target << " |error| "
                  << std::abs(predictions[i] - config.objectives[i].target) << '\n';
    std::cout << "summed absolute error: " << summed_error << '\n';
}

int fail(const std::string& message) {
    std::cerr << "error: " << message << '\n';
    return 1;
}

}  // namespace

int cmd_train(const CommandOptions& options) {
    try {
        const RunConfig config = load_effective_config(options);
        const ParameterSpace space = space_from_config(config);
        const auto model = build_model(config, space);
        DirLock lock(options.out_dir);

        AgentEnsemble ensemble =
            make_ensemble(space, objective_names_from_config(config),
                          targets_from_config(config), config.training, config.seed);
        RunLog log = run_training(config.training, space, *model, ensemble, config.seed);

        const fs::path dir(options.out_dir);
        write_run_log_csv(log, space, (dir / "run_log.csv").string());
        EpsilonSchedule schedule(config.training.epsilon_increment,
                                 config.training.epsilon_max);
        schedule.restore(static_cast<std::int64_t>(log.records.size()));
        save_checkpoint(ensemble, static_cast<std::int64_t>(log.records.size()), schedule,
                        (dir / "checkpoint.json").string());
        write_summary(dir, "marl", config, log.best_state, log.best_predictions,
                      log.best_summed_error);
        {
            std::ofstream out(dir / "config.json");
            out << serialize_config(config) << '\n';
        }
        print_best(config, log.best_state, log.best_predictions, log.best_summed_error,
                   options.quiet);
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

int cmd_simulate_data(const CommandOptions& options, std::size_t count, double noise_sd,
                      const std::string& out_path) {
    try {
        const RunConfig config = load_effective_config(options);
        const ParameterSpace space = space_from_config(config);
        const Dataset data =
            generate_dataset(space, count, noise_sd, sub_seed(config.seed, "dataset"));
        write_dataset_csv(data, out_path);
        if (!options.quiet)
            std::cout << "wrote " << data.size() << " rows to " << out_path << '\n';
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

int cmd_baseline(const CommandOptions& options, const std::string& algorithm) {
    try {
        const RunConfig config = load_effective_config(options);
        const ParameterSpace space = space_from_config(config);
        const auto model = build_model(config, space);
        DirLock lock(options.out_dir);

        BaselineResult result;
        if (algorithm == "nsga2") {
            result = run_nsga2(space, *model, targets_from_config(config), config.nsga2,
                               config.seed);
        } else if (algorithm == "mopso") {
            result = run_mopso(space, *model, targets_from_config(config), config.mopso,
                               config.seed);
        } else {
            return fail("unknown baseline algorithm: " + algorithm);
        }

        const fs::path dir(options.out_dir);
        // Final non-dominated set, one row per member.
        {
            std::ofstream out(dir / "front.csv");
            std::vector<std::string> header;
            for (const auto& s : config.space) header.push_back(s.name);
            for (const auto& o : config.objectives) header.push_back("achieved_" + o.name);
            for (const auto& o : config.objectives) header.push_back("abs_error_" + o.name);
            out << join_csv(header) << '\n';
            for (const auto& ind : result.front) {
                std::vector<std::string> fields;
                for (double v : ind.genome.values) fields.push_back(format_real(v));
                for (double v : ind.objectives) fields.push_back(format_real(v));
                for (double v : ind.errors) fields.push_back(format_real(v));
                out << join_csv(fields) << '\n';
            }
        }
        write_summary(dir, algorithm, config, result.best_state, result.best_predictions,
                      result.best_summed_error);
        {
            std::ofstream out(dir / "config.json");
            out << serialize_config(config) << '\n';
        }
        print_best(config, result.best_state, result.best_predictions,
                   result.best_summed_error, options.quiet);
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

int cmd_brute_force(const CommandOptions& options) {
    try {
        const RunConfig config = load_effective_config(options);
        const ParameterSpace space = space_from_config(config);
        const auto model = build_model(config, space);
        DirLock lock(options.out_dir);

        const BruteForceResult result =
            brute_force_optimum(space, *model, targets_from_config(config));

        const fs::path dir(options.out_dir);
        write_summary(dir, "brute_force", config, result.state, result.predictions,
                      result.summed_error);
        {
            std::ofstream out(dir / "grid_stats.json");
            json j;
            j["grid_cardinality"] = space.grid_cardinality();
            j["median_summed_error"] = result.median_summed_error;
            out << j.dump(2) << '\n';
        }
        print_best(config, result.state, result.predictions, result.summed_error,
                   options.quiet);
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

int cmd_compare(const std::vector<std::string>& run_dirs, const std::string& out_path,
                bool quiet) {
    try {
        if (run_dirs.empty()) return fail("compare needs at least one run directory");
        std::vector<json> summaries;
        for (const auto& dir : run_dirs) {
            const fs::path path = fs::path(dir) / "summary.json";
            std::ifstream in(path);
            if (!in) return fail("missing run summary: " + path.string());
            json j;
            in >> j;
            summaries.push_back(std::move(j));
        }

        // One row per method: solution, then target/achieved/error per
        // objective, then the summed absolute error.
        std::vector<std::string> header = {"method"};
        for (const auto& v : summaries.front().at("variables"))
            header.push_back(v.at("name").get<std::string>());
        for (const auto& o : summaries.front().at("objectives")) {
            const auto name = o.at("name").get<std::string>();
            header.push_back("target_" + name);
            header.push_back("achieved_" + name);
            header.push_back("abs_error_" + name);
        }
        header.push_back("summed_error");

        std::vector<std::vector<std::string>> rows;
        for (const auto& s : summaries) {
            std::vector<std::string> row = {s.at("method").get<std::string>()};
            for (const auto& v : s.at("variables"))
                row.push_back(format_real(v.at("value").get<double>()));
            for (const auto& o : s.at("objectives")) {
                row.push_back(format_real(o.at("target").get<double>()));
                row.push_back(format_real(o.at("achieved").get<double>()));
                row.push_back(format_real(o.at("abs_error").get<double>()));
            }
            row.push_back(format_real(s.at("summed_error").get<double>()));
            rows.push_back(std::move(row));
        }

        std::ostream* out = &std::cout;
        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) return fail("cannot write comparison table: " + out_path);
            out = &file;
        }
        *out << join_csv(header) << '\n';
        for (const auto& row : rows) *out << join_csv(row) << '\n';
        if (!quiet && !out_path.empty())
            std::cout << "wrote comparison of " << rows.size() << " runs to " << out_path
                      << '\n';
        return 0;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

}  // namespace fadeopt
