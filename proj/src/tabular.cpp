#include "fadeopt/tabular.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "fadeopt/rng.hpp"

namespace fadeopt {

std::int64_t grid_enumeration_cap() {
    if (const char* env = std::getenv("FADEOPT_MAX_GRID")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
        throw std::invalid_argument("FADEOPT_MAX_GRID must be a positive integer");
    }
    return kDefaultGridCap;
}

namespace {

void require_under_cap(const ParameterSpace& space) {
    const auto cap = grid_enumeration_cap();
    if (space.grid_cardinality() > cap)
        throw std::invalid_argument("grid cardinality " +
                                    std::to_string(space.grid_cardinality()) +
                                    " exceeds the enumeration cap " + std::to_string(cap));
}

}  // namespace

QTable::QTable(const ParameterSpace& space)
    : num_states_(space.grid_cardinality()), num_actions_(space.action_count()) {
    require_under_cap(space);
    values_.assign(static_cast<std::size_t>(num_states_ * num_actions_), 0.0);
    feasible_.resize(values_.size());
    for (std::int64_t s = 0; s < num_states_; ++s) {
        const auto mask = space.feasible_mask(space.state_from_index(s));
        for (std::int64_t a = 0; a < num_actions_; ++a)
            feasible_[static_cast<std::size_t>(s * num_actions_ + a)] =
                mask[static_cast<std::size_t>(a)];
    }
}

double& QTable::at(std::int64_t s, std::int64_t a) {
    return values_[static_cast<std::size_t>(s * num_actions_ + a)];
}

double QTable::at(std::int64_t s, std::int64_t a) const {
    return values_[static_cast<std::size_t>(s * num_actions_ + a)];
}

bool QTable::feasible(std::int64_t s, std::int64_t a) const {
    return feasible_[static_cast<std::size_t>(s * num_actions_ + a)];
}

std::int64_t QTable::greedy_action(std::int64_t s) const {
    std::int64_t best = -1;
    double best_q = -std::numeric_limits<double>::infinity();
    for (std::int64_t a = 0; a < num_actions_; ++a)
        if (feasible(s, a) && at(s, a) > best_q) {
            best = a;
            best_q = at(s, a);
        }
    return best;
}

double QTable::max_feasible(std::int64_t s) const {
    return at(s, greedy_action(s));
}

double q_update(double q, double r, double max_next, double alpha, double gamma) {
    return q + alpha * (r + gamma * max_next - q);
}

ValueIterationResult value_iteration(const ParameterSpace& space, const RewardFn& reward,
                                     double gamma, double tol) {
    require_under_cap(space);
    if (gamma < 0.0 || gamma >= 1.0)
        throw std::invalid_argument("value iteration requires gamma in [0, 1)");
    const std::int64_t states = space.grid_cardinality();
    const std::int64_t actions = space.action_count();

    // Precompute deterministic transitions and rewards.
    std::vector<std::int64_t> next(static_cast<std::size_t>(states * actions), -1);
    std::vector<double> rew(static_cast<std::size_t>(states * actions), 0.0);
    for (std::int64_t s = 0; s < states; ++s) {
        const StateVector state = space.state_from_index(s);
        const auto mask = space.feasible_mask(state);
        for (std::int64_t a = 0; a < actions; ++a) {
            if (!mask[static_cast<std::size_t>(a)]) continue;
            const StateVector ns = space.apply_action(state, a);
            next[static_cast<std::size_t>(s * actions + a)] = space.state_index(ns);
            rew[static_cast<std::size_t>(s * actions + a)] = reward(state, a, ns);
        }
    }

    ValueIterationResult result;
    result.values.assign(static_cast<std::size_t>(states), 0.0);
    result.policy.assign(static_cast<std::size_t>(states), -1);
    for (;;) {
        double residual = 0.0;
        for (std::int64_t s = 0; s < states; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            std::int64_t best_a = -1;
            for (std::int64_t a = 0; a < actions; ++a) {
                const auto k = static_cast<std::size_t>(s * actions + a);
                if (next[k] < 0) continue;
                const double v = rew[k] + gamma * result.values[static_cast<std::size_t>(next[k])];
                if (v > best) {
                    best = v;
                    best_a = a;
                }
            }
            residual = std::max(residual, std::abs(best - result.values[static_cast<std::size_t>(s)]));
            result.values[static_cast<std::size_t>(s)] = best;
            result.policy[static_cast<std::size_t>(s)] = best_a;
        }
        ++result.sweeps;
        result.residual = residual;
        if (residual <= tol) break;
        if (result.sweeps > 1000000)
            throw std::runtime_error("value iteration failed to converge");
    }

    // Re-extract the policy with the lowest-index tie-break against the
    // converged values.
    for (std::int64_t s = 0; s < states; ++s) {
        double best = -std::numeric_limits<double>::infinity();
        std::int64_t best_a = -1;
        for (std::int64_t a = 0; a < actions; ++a) {
            const auto k = static_cast<std::size_t>(s * actions + a);
            if (next[k] < 0) continue;
            const double v = rew[k] + gamma * result.values[static_cast<std::size_t>(next[k])];
            if (v > best + 1e-12) {
                best = v;
                best_a = a;
            }
        }
        result.policy[static_cast<std::size_t>(s)] = best_a;
    }
    return result;
}

QLearningResult run_q_learning(const ParameterSpace& space, const RewardFn& reward, double alpha,
                               double gamma, const EpsilonFn& epsilon, std::int64_t steps,
                               std::uint64_t seed) {
    require_under_cap(space);
    QTable table(space);
    Rng rng(seed);
    StateVector state = space.random_state(rng);
    std::int64_t s = space.state_index(state);

    for (std::int64_t t = 1; t <= steps; ++t) {
        const double eps = epsilon(t);
        std::int64_t a;
        if (rng.uniform01() < eps) {
            a = table.greedy_action(s);
        } else {
            // Uniform over feasible actions.
            std::vector<std::int64_t> feasible;
            for (std::int64_t k = 0; k < table.num_actions(); ++k)
                if (table.feasible(s, k)) feasible.push_back(k);
            a = feasible[static_cast<std::size_t>(rng.below(feasible.size()))];
        }
        const StateVector next_state = space.apply_action(state, a);
        const std::int64_t ns = space.state_index(next_state);
        const double r = reward(state, a, next_state);
        table.at(s, a) = q_update(table.at(s, a), r, table.max_feasible(ns), alpha, gamma);
        state = next_state;
        s = ns;
    }

    QLearningResult result{std::move(table), {}};
    result.policy.reserve(static_cast<std::size_t>(result.table.num_states()));
    for (std::int64_t i = 0; i < result.table.num_states(); ++i)
        result.policy.push_back(result.table.greedy_action(i));
    return result;
}

}  // namespace fadeopt
