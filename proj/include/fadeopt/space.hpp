#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fadeopt/rng.hpp"

namespace fadeopt {

// One adjustable process variable: its bounds and the unit step the agents
// may move it by. (high - low) must close onto the step grid.
struct ParameterSpec {
    std::string name;
    double low = 0.0;
    double high = 0.0;
    double unit_step = 0.0;

    // Number of grid levels: 1 + (high - low) / unit_step.
    std::int64_t levels() const;
};

struct StateVector {
    std::vector<double> values;

    bool operator==(const StateVector&) const = default;
};

// Per-variable delta multipliers, each in {-1, 0, +1}.
struct ActionVector {
    std::vector<int> deltas;

    bool operator==(const ActionVector&) const = default;
};

class SpaceError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The discrete parameter grid and its 3^n joint action set. Actions are
// indexed by base-3 encoding of (delta + 1) with the last variable as the
// least significant digit, so index (3^n - 1) / 2 is the all-zero action.
class ParameterSpace {
public:
    explicit ParameterSpace(std::vector<ParameterSpec> specs);

    std::size_t num_variables() const { return specs_.size(); }
    const std::vector<ParameterSpec>& specs() const { return specs_; }
    const ParameterSpec& spec(std::size_t j) const { return specs_[j]; }

    std::int64_t action_count() const { return action_count_; }
    std::int64_t grid_cardinality() const { return grid_cardinality_; }

    ActionVector action_from_index(std::int64_t index) const;
    std::int64_t action_index(const ActionVector& action) const;
    std::vector<ActionVector> enumerate_actions() const;

    bool contains(const StateVector& state) const;
    void require_valid(const StateVector& state) const;

    // Deterministic transition; throws SpaceError if any component leaves
    // its range.
    StateVector apply_action(const StateVector& state, const ActionVector& action) const;
    StateVector apply_action(const StateVector& state, std::int64_t action_index) const;

    // mask[k] is true iff action k keeps every component in bounds.
    std::vector<char> feasible_mask(const StateVector& state) const;

    // Min-max normalization of each component to [0, 1].
    std::vector<double> encode_state(const StateVector& state) const;

    StateVector random_state(Rng& rng) const;
    StateVector random_state(std::uint64_t seed) const;

    // Mixed-radix grid index (variable 0 most significant) and its inverse.
    std::int64_t state_index(const StateVector& state) const;
    StateVector state_from_index(std::int64_t index) const;

    // Snaps an arbitrary point to the nearest in-bounds grid state.
    StateVector snap(const std::vector<double>& position) const;

private:
    std::vector<ParameterSpec> specs_;
    std::int64_t action_count_ = 0;
    std::int64_t grid_cardinality_ = 0;
};

ParameterSpace build_space(std::vector<ParameterSpec> specs);

}  // namespace fadeopt
