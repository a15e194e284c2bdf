#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fadeopt/space.hpp"

namespace fadeopt {

// r(s, a, s') for deterministic transitions.
using RewardFn =
    std::function<double(const StateVector&, std::int64_t, const StateVector&)>;

// ε as a function of the step index (probability of acting greedily).
using EpsilonFn = std::function<double(std::int64_t)>;

inline constexpr std::int64_t kDefaultGridCap = 10000;

// Overridable via FADEOPT_MAX_GRID.
std::int64_t grid_enumeration_cap();

// Dense (state, action) value table over a small grid. Infeasible pairs are
// never selected by the greedy policy.
class QTable {
public:
    explicit QTable(const ParameterSpace& space);

    double& at(std::int64_t state_index, std::int64_t action_index);
    double at(std::int64_t state_index, std::int64_t action_index) const;

    // Feasible argmax, ties to the lowest action index.
    std::int64_t greedy_action(std::int64_t state_index) const;
    double max_feasible(std::int64_t state_index) const;
    bool feasible(std::int64_t state_index, std::int64_t action_index) const;

    std::int64_t num_states() const { return num_states_; }
    std::int64_t num_actions() const { return num_actions_; }

    bool operator==(const QTable& other) const {
        return values_ == other.values_;
    }

private:
    std::int64_t num_states_;
    std::int64_t num_actions_;
    std::vector<double> values_;
    std::vector<char> feasible_;
};

double q_update(double q, double r, double max_next, double alpha, double gamma);

struct ValueIterationResult {
    std::vector<double> values;        // per grid state index
    std::vector<std::int64_t> policy;  // greedy action per state
    double residual = 0.0;
    std::int64_t sweeps = 0;
};

ValueIterationResult value_iteration(const ParameterSpace& space, const RewardFn& reward,
                                     double gamma, double tol);

struct QLearningResult {
    QTable table;
    std::vector<std::int64_t> policy;
};

QLearningResult run_q_learning(const ParameterSpace& space, const RewardFn& reward, double alpha,
                               double gamma, const EpsilonFn& epsilon, std::int64_t steps,
                               std::uint64_t seed);

}  // namespace fadeopt
