#include "fadeopt/space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

namespace fadeopt {

namespace {

// Grid membership with a small tolerance against accumulated float error.
bool on_grid(double value, const ParameterSpec& spec) {
    if (value < spec.low - 1e-9 || value > spec.high + 1e-9) return false;
    const double steps = (value - spec.low) / spec.unit_step;
    return std::abs(steps - std::round(steps)) < 1e-6;
}

}  // namespace

std::int64_t ParameterSpec::levels() const {
    return 1 + static_cast<std::int64_t>(std::llround((high - low) / unit_step));
}

ParameterSpace::ParameterSpace(std::vector<ParameterSpec> specs) : specs_(std::move(specs)) {
    if (specs_.empty()) throw SpaceError("parameter space needs at least one variable");
    action_count_ = 1;
    grid_cardinality_ = 1;
    for (const auto& s : specs_) {
        if (s.unit_step <= 0.0)
            throw SpaceError("parameter '" + s.name + "': unit_step must be positive");
        if (s.low >= s.high)
            throw SpaceError("parameter '" + s.name + "': low must be below high");
        const double steps = (s.high - s.low) / s.unit_step;
        if (std::abs(steps - std::round(steps)) > 1e-9)
            throw SpaceError("parameter '" + s.name +
                             "': range is not a whole number of unit steps");
        action_count_ *= 3;
        grid_cardinality_ *= s.levels();
    }
}

ParameterSpace build_space(std::vector<ParameterSpec> specs) {
    return ParameterSpace(std::move(specs));
}

ActionVector ParameterSpace::action_from_index(std::int64_t index) const {
    if (index < 0 || index >= action_count_) throw SpaceError("action index out of range");
    const std::size_t n = specs_.size();
    ActionVector action;
    action.deltas.resize(n);
    for (std::size_t j = n; j-- > 0;) {
        action.deltas[j] = static_cast<int>(index % 3) - 1;
        index /= 3;
    }
    return action;
}

std::int64_t ParameterSpace::action_index(const ActionVector& action) const {
    if (action.deltas.size() != specs_.size()) throw SpaceError("action arity mismatch");
    std::int64_t index = 0;
    for (int d : action.deltas) {
        if (d < -1 || d > 1) throw SpaceError("action delta outside {-1, 0, +1}");
        index = index * 3 + (d + 1);
    }
    return index;
}

std::vector<ActionVector> ParameterSpace::enumerate_actions() const {
    std::vector<ActionVector> actions;
    actions.reserve(static_cast<std::size_t>(action_count_));
    for (std::int64_t k = 0; k < action_count_; ++k) actions.push_back(action_from_index(k));
    return actions;
}

bool ParameterSpace::contains(const StateVector& state) const {
    if (state.values.size() != specs_.size()) return false;
    for (std::size_t j = 0; j < specs_.size(); ++j)
        if (!on_grid(state.values[j], specs_[j])) return false;
    return true;
}

void ParameterSpace::require_valid(const StateVector& state) const {
    if (!contains(state)) throw SpaceError("state is not on the parameter grid");
}

StateVector ParameterSpace::apply_action(const StateVector& state,
                                         const ActionVector& action) const {
    if (state.values.size() != specs_.size() || action.deltas.size() != specs_.size())
        throw SpaceError("state/action arity mismatch");
    StateVector next;
    next.values.resize(specs_.size());
    for (std::size_t j = 0; j < specs_.size(); ++j) {
        const double v = state.values[j] + action.deltas[j] * specs_[j].unit_step;
        if (v < specs_[j].low - 1e-9 || v > specs_[j].high + 1e-9)
            throw SpaceError("action moves '" + specs_[j].name + "' out of range");
        next.values[j] = v;
    }
    return next;
}

StateVector ParameterSpace::apply_action(const StateVector& state,
                                         std::int64_t action_index) const {
    return apply_action(state, action_from_index(action_index));
}

std::vector<char> ParameterSpace::feasible_mask(const StateVector& state) const {
    require_valid(state);
    const std::size_t n = specs_.size();
    // can_move[j][d+1]: component j may move by delta d.
    std::vector<std::array<bool, 3>> can_move(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& s = specs_[j];
        can_move[j] = {state.values[j] - s.unit_step >= s.low - 1e-9, true,
                       state.values[j] + s.unit_step <= s.high + 1e-9};
    }
    std::vector<char> mask(static_cast<std::size_t>(action_count_));
    for (std::int64_t k = 0; k < action_count_; ++k) {
        std::int64_t rest = k;
        bool ok = true;
        for (std::size_t j = n; j-- > 0;) {
            const int digit = static_cast<int>(rest % 3);
            rest /= 3;
            if (!can_move[j][digit]) {
                ok = false;
                break;
            }
        }
        mask[static_cast<std::size_t>(k)] = ok;
    }
    return mask;
}

std::vector<double> ParameterSpace::encode_state(const StateVector& state) const {
    require_valid(state);
    std::vector<double> encoded(specs_.size());
    for (std::size_t j = 0; j < specs_.size(); ++j)
        encoded[j] = (state.values[j] - specs_[j].low) / (specs_[j].high - specs_[j].low);
    return encoded;
}

StateVector ParameterSpace::random_state(Rng& rng) const {
    StateVector state;
    state.values.resize(specs_.size());
    for (std::size_t j = 0; j < specs_.size(); ++j) {
        const auto level = static_cast<double>(rng.below(static_cast<std::uint64_t>(specs_[j].levels())));
        state.values[j] = specs_[j].low + level * specs_[j].unit_step;
    }
    return state;
}

StateVector ParameterSpace::random_state(std::uint64_t seed) const {
    Rng rng(seed);
    return random_state(rng);
}

std::int64_t ParameterSpace::state_index(const StateVector& state) const {
    require_valid(state);
    std::int64_t index = 0;
    for (std::size_t j = 0; j < specs_.size(); ++j) {
        const auto level =
            std::llround((state.values[j] - specs_[j].low) / specs_[j].unit_step);
        index = index * specs_[j].levels() + level;
    }
    return index;
}

StateVector ParameterSpace::state_from_index(std::int64_t index) const {
    if (index < 0 || index >= grid_cardinality_) throw SpaceError("state index out of range");
    StateVector state;
    state.values.resize(specs_.size());
    for (std::size_t j = specs_.size(); j-- > 0;) {
        const std::int64_t levels = specs_[j].levels();
        state.values[j] = specs_[j].low + static_cast<double>(index % levels) * specs_[j].unit_step;
        index /= levels;
    }
    return state;
}

StateVector ParameterSpace::snap(const std::vector<double>& position) const {
    if (position.size() != specs_.size()) throw SpaceError("position arity mismatch");
    StateVector state;
    state.values.resize(specs_.size());
    for (std::size_t j = 0; j < specs_.size(); ++j) {
        const auto& s = specs_[j];
        double level = std::round((position[j] - s.low) / s.unit_step);
        level = std::max(0.0, std::min(level, static_cast<double>(s.levels() - 1)));
        state.values[j] = s.low + level * s.unit_step;
    }
    return state;
}

}  // namespace fadeopt
