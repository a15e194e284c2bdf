#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fadeopt/dqn.hpp"
#include "fadeopt/space.hpp"
#include "fadeopt/surrogate.hpp"

namespace fadeopt {

// Increasing greedy probability: eps(t) = min(increment * t, eps_max),
// computed from the step counter so the logged trace is exact.
class EpsilonSchedule {
public:
    EpsilonSchedule(double increment, double eps_max);

    double current() const;
    void step() { ++steps_; }
    std::int64_t steps() const { return steps_; }
    void restore(std::int64_t steps) { steps_ = steps; }

    double increment() const { return increment_; }
    double eps_max() const { return eps_max_; }

private:
    double increment_;
    double eps_max_;
    std::int64_t steps_ = 0;
};

// Improvement reward: |f_now - p| - |f_next - p|.
double reward(double f_now, double f_next, double target);

// Feasible argmax of the summed per-agent values; ties to the lowest index.
std::int64_t utilitarian_select(const std::vector<std::vector<double>>& q_per_agent,
                                const std::vector<char>& mask);

// Greedy with probability eps, else uniform over feasible actions.
std::int64_t epsilon_choose(double eps, std::int64_t greedy_index,
                            const std::vector<char>& mask, Rng& rng);

struct Agent {
    std::string objective_name;
    double target = 0.0;
    QNetwork online;
    QNetwork target_net;
};

struct AgentEnsemble {
    std::vector<Agent> agents;
    ReplayBuffer buffer;  // one record serves all agents

    AgentEnsemble(std::vector<Agent> agents_in, std::size_t buffer_capacity)
        : agents(std::move(agents_in)), buffer(buffer_capacity) {}
    std::size_t num_agents() const { return agents.size(); }
};

struct TrainingSettings {
    std::size_t hidden = 50;
    std::int64_t warmup_steps = 100;   // no learning before this many env steps
    std::int64_t sync_period = 5;      // target reset every F gradient steps
    std::size_t buffer_capacity = 2000;
    std::size_t batch_size = 32;
    double learning_rate = 0.01;
    double discount = 0.9;
    double epsilon_increment = 0.001;
    double epsilon_max = 0.9;
    std::int64_t episodes = 1;
    std::int64_t steps_per_episode = 5000;
    std::optional<double> stop_threshold;  // summed error marking success-termination
};

struct StepRecord {
    std::int64_t step = 0;  // 1-based across the whole run
    std::int64_t episode = 0;
    double epsilon = 0.0;
    std::int64_t action_index = 0;
    StateVector state;  // state after the transition
    std::vector<double> rewards;
    std::vector<double> losses;
    std::vector<double> abs_errors;
    std::vector<double> min_abs_errors;  // running minima
    double summed_error = 0.0;
    double min_summed_error = 0.0;
};

struct RunLog {
    std::vector<std::string> objective_names;
    std::vector<StepRecord> records;
    StateVector best_state;
    double best_summed_error = 0.0;
    std::vector<double> best_predictions;
};

AgentEnsemble make_ensemble(const ParameterSpace& space,
                            const std::vector<std::string>& objective_names,
                            const std::vector<double>& targets, const TrainingSettings& settings,
                            std::uint64_t seed);

RunLog run_training(const TrainingSettings& settings, const ParameterSpace& space,
                    const ObjectiveModel& model, AgentEnsemble& ensemble, std::uint64_t seed);

void write_run_log_csv(const RunLog& log, const ParameterSpace& space, const std::string& path);

// Exhaustive enumeration is cheap even on the full case-study grid, so the
// brute-force oracle gets a higher default cap than the tabular oracles.
inline constexpr std::int64_t kBruteForceGridCap = 1000000;

struct BruteForceResult {
    StateVector state;
    double summed_error = 0.0;
    std::vector<double> predictions;
    double median_summed_error = 0.0;  // over the whole grid
};

// Exhaustive grid scan; ties go to the lexicographically smallest state.
BruteForceResult brute_force_optimum(const ParameterSpace& space, const ObjectiveModel& model,
                                     const std::vector<double>& targets);

// Max over sampled states, agents i, and feasible alternatives a' of
// Q_i(s, a') - Q_i(s, a*) where a* is the utilitarian choice.
double deviation_check(const AgentEnsemble& ensemble, const std::vector<StateVector>& states,
                       const ParameterSpace& space);

// Portable JSON checkpoint: shapes and row-major weights of both networks
// per agent, plus the step counter and epsilon state.
void save_checkpoint(const AgentEnsemble& ensemble, std::int64_t step,
                     const EpsilonSchedule& schedule, const std::string& path);
void load_checkpoint(AgentEnsemble& ensemble, std::int64_t& step, EpsilonSchedule& schedule,
                     const std::string& path);

}  // namespace fadeopt
