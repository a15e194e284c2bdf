#pragma once

#include <string>
#include <vector>

#include "fadeopt/config.hpp"

namespace fadeopt {

struct CommandOptions {
    std::string config_path;  // empty: shipped defaults
    std::string out_dir;
    bool has_seed_override = false;
    std::uint64_t seed_override = 0;
    bool quiet = false;
};

// All commands return a process exit status and print a single-line
// diagnostic on failure.
int cmd_train(const CommandOptions& options);
int cmd_simulate_data(const CommandOptions& options, std::size_t count, double noise_sd,
                      const std::string& out_path);
int cmd_baseline(const CommandOptions& options, const std::string& algorithm);
int cmd_brute_force(const CommandOptions& options);
int cmd_compare(const std::vector<std::string>& run_dirs, const std::string& out_path,
                bool quiet);

}  // namespace fadeopt
