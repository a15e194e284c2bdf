#include <CLI11.hpp>
#include <string>
#include <vector>

#include "fadeopt/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Multi-agent DQN optimizer for discrete process parameter grids"};
    app.require_subcommand(1);

    fadeopt::CommandOptions options;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_out) {
        cmd->add_option("--config", options.config_path, "run configuration JSON");
        if (needs_out)
            cmd->add_option("--out", options.out_dir, "output directory")->required();
        cmd->add_option("--seed", seed, "override the config seed");
        cmd->add_flag("--quiet", options.quiet, "suppress progress output");
    };

    auto* train = app.add_subcommand("train", "train the agent ensemble and log the run");
    add_common(train, true);

    auto* simulate = app.add_subcommand("simulate-data", "write a synthetic dataset CSV");
    std::size_t count = 129;
    double noise_sd = 0.0;
    std::string data_out;
    add_common(simulate, false);
    simulate->add_option("--count", count, "number of rows");
    simulate->add_option("--noise-sd", noise_sd, "Gaussian noise per output");
    simulate->add_option("--data-out", data_out, "dataset CSV path")->required();

    auto* baseline = app.add_subcommand("baseline", "run an evolutionary/swarm baseline");
    std::string algorithm;
    add_common(baseline, true);
    baseline->add_option("--algorithm", algorithm, "nsga2 or mopso")->required();

    auto* brute = app.add_subcommand("brute-force", "exhaustive grid optimum");
    add_common(brute, true);

    auto* compare = app.add_subcommand("compare", "tabulate completed runs");
    std::vector<std::string> run_dirs;
    std::string table_out;
    compare->add_option("runs", run_dirs, "run directories")->required();
    compare->add_option("--out", table_out, "comparison CSV path (default: stdout)");
    compare->add_flag("--quiet", options.quiet, "suppress progress output");

    CLI11_PARSE(app, argc, argv);

    options.has_seed_override = app.count_all() && (train->count("--seed") ||
                                                    simulate->count("--seed") ||
                                                    baseline->count("--seed") ||
                                                    brute->count("--seed"));
    options.seed_override = seed;

    if (train->parsed()) return fadeopt::cmd_train(options);
    if (simulate->parsed())
        return fadeopt::cmd_simulate_data(options, count, noise_sd, data_out);
    if (baseline->parsed()) return fadeopt::cmd_baseline(options, algorithm);
    if (brute->parsed()) return fadeopt::cmd_brute_force(options);
    if (compare->parsed()) return fadeopt::cmd_compare(run_dirs, table_out, options.quiet);
    return 1;
}
