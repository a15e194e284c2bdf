#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "fadeopt/tabular.hpp"

using namespace fadeopt;

namespace {

// 1-variable chain over [0, high]; reward 1 for landing on the top state.
RewardFn top_reward(double top) {
    return [top](const StateVector&, std::int64_t, const StateVector& next) {
        return next.values[0] == top ? 1.0 : 0.0;
    };
}

}  // namespace

TEST_CASE("q_update arithmetic and contraction") {
    CHECK(q_update(3.0, 1.0, 2.0, 0.0, 0.9) == 3.0);
    CHECK(q_update(3.0, 1.0, 2.0, 1.0, 0.0) == 1.0);
    CHECK(q_update(0.0, 1.0, 2.0, 0.5, 0.9) == doctest::Approx(1.4));

    // |q' - target| = (1 - alpha) |q - target|
    for (double alpha : {0.1, 0.5, 1.0}) {
        const double target = 1.0 + 0.9 * 2.0;
        const double q = -0.7;
        const double next = q_update(q, 1.0, 2.0, alpha, 0.9);
        CHECK(std::abs(next - target) ==
              doctest::Approx((1 - alpha) * std::abs(q - target)).epsilon(1e-12));
    }
}

TEST_CASE("value iteration on a 3-state chain") {
    const auto space = build_space({{"x", 0, 2, 1}});
    const auto result = value_iteration(space, top_reward(2), 0.9, 1e-10);
    CHECK(result.residual <= 1e-10);
    // Interior and bottom states step upward; index 2 is the +1 action.
    CHECK(result.policy[0] == 2);
    CHECK(result.policy[1] == 2);
    // From the top, stepping down and returning re-earns the reward, which
    // beats staying put under this reward.
    CHECK(result.values[1] > result.values[0]);

    // Zero reward: V = 0 everywhere.
    const auto zero = value_iteration(
        space, [](const StateVector&, std::int64_t, const StateVector&) { return 0.0; }, 0.9,
        1e-12);
    for (double v : zero.values) CHECK(v == 0.0);

    // gamma = 0: V is the best immediate reward.
    const auto myopic = value_iteration(space, top_reward(2), 0.0, 1e-12);
    CHECK(myopic.values[0] == 0.0);  // cannot reach the top in one step
    CHECK(myopic.values[1] == 1.0);
    CHECK(myopic.values[2] == 1.0);
}

TEST_CASE("value iteration policy is invariant to constant reward shifts") {
    const auto space = build_space({{"x", 0, 5, 1}});
    const auto base = value_iteration(space, top_reward(5), 0.95, 1e-10);
    RewardFn shifted = [](const StateVector&, std::int64_t, const StateVector& next) {
        return (next.values[0] == 5.0 ? 1.0 : 0.0) + 3.0;
    };
    const auto moved = value_iteration(space, shifted, 0.95, 1e-10);
    CHECK(base.policy == moved.policy);
}

TEST_CASE("q-learning matches value iteration on the chain") {
    const auto space = build_space({{"x", 0, 2, 1}});
    const auto vi = value_iteration(space, top_reward(2), 0.9, 1e-10);
    const auto ql = run_q_learning(
        space, top_reward(2), 0.1, 0.9, [](std::int64_t) { return 0.1; }, 50000, 7);
    CHECK(ql.policy == vi.policy);

    // Determinism and the zero-reward case.
    const auto again = run_q_learning(
        space, top_reward(2), 0.1, 0.9, [](std::int64_t) { return 0.1; }, 50000, 7);
    CHECK(ql.table == again.table);

    const auto silent = run_q_learning(
        space, [](const StateVector&, std::int64_t, const StateVector&) { return 0.0; }, 0.5,
        0.9, [](std::int64_t) { return 0.2; }, 5000, 3);
    for (std::int64_t s = 0; s < silent.table.num_states(); ++s)
        for (std::int64_t a = 0; a < silent.table.num_actions(); ++a)
            CHECK(silent.table.at(s, a) == 0.0);
}

TEST_CASE("one full sweep with gamma=0, alpha=1 reproduces immediate rewards") {
    const auto space = build_space({{"x", 0, 3, 1}});
    QTable table(space);
    const auto reward = top_reward(3);
    for (std::int64_t s = 0; s < table.num_states(); ++s) {
        const StateVector state = space.state_from_index(s);
        for (std::int64_t a = 0; a < table.num_actions(); ++a) {
            if (!table.feasible(s, a)) continue;
            const StateVector next = space.apply_action(state, a);
            table.at(s, a) = q_update(table.at(s, a), reward(state, a, next), 0.0, 1.0, 0.0);
        }
    }
    for (std::int64_t s = 0; s < table.num_states(); ++s)
        for (std::int64_t a = 0; a < table.num_actions(); ++a)
            if (table.feasible(s, a)) {
                const StateVector next =
                    space.apply_action(space.state_from_index(s), a);
                CHECK(table.at(s, a) == (next.values[0] == 3.0 ? 1.0 : 0.0));
            }
}

TEST_CASE("enumeration cap guards large grids") {
    const auto big = build_space({{"x", 0, 20000, 1}});
    CHECK_THROWS(value_iteration(
        big, [](const StateVector&, std::int64_t, const StateVector&) { return 0.0; }, 0.9,
        1e-6));

    // FADEOPT_MAX_GRID raises the cap.
    setenv("FADEOPT_MAX_GRID", "50000", 1);
    CHECK(grid_enumeration_cap() == 50000);
    unsetenv("FADEOPT_MAX_GRID");
    CHECK(grid_enumeration_cap() == kDefaultGridCap);
}
