#include <doctest.h>

#include "fadeopt/config.hpp"

using namespace fadeopt;

TEST_CASE("defaults reproduce the case-study settings") {
    const auto config = default_config();
    CHECK(config.training.sync_period == 5);
    CHECK(config.training.warmup_steps == 100);
    CHECK(config.training.buffer_capacity == 2000);
    CHECK(config.training.learning_rate == 0.01);
    CHECK(config.training.discount == 0.9);
    CHECK(config.training.epsilon_increment == 0.001);
    CHECK(config.training.epsilon_max == 0.9);
    CHECK(config.training.episodes == 1);
    CHECK(config.training.steps_per_episode == 5000);
    CHECK(config.training.hidden == 50);

    REQUIRE(config.objectives.size() == 4);
    CHECK(config.objectives[0].target == 0.81);
    CHECK(config.objectives[1].target == 15.76);
    CHECK(config.objectives[2].target == -20.84);
    CHECK(config.objectives[3].target == -70.79);

    const auto space = space_from_config(config);
    CHECK(space.action_count() == 81);
    CHECK(space.grid_cardinality() == 36960);

    // Baseline budgets match the training step count.
    CHECK(config.nsga2.population * (config.nsga2.generations + 1) == 5000);
    CHECK(config.mopso.swarm * (config.mopso.iterations + 1) == 5000);
}

TEST_CASE("config round-trips through serialization") {
    auto config = default_config();
    config.seed = 77;
    config.training.stop_threshold = 0.25;
    config.model_type = "forest";
    config.forest = ForestModelConfig{"data.csv", 42, 6, 2};
    const auto text = serialize_config(config);
    const auto parsed = parse_config(text);
    CHECK(serialize_config(parsed) == text);
    CHECK(parsed.seed == 77);
    CHECK(parsed.training.stop_threshold == 0.25);
    CHECK(parsed.forest->trees == 42);
    CHECK(parsed.forest->data_path == "data.csv");
}

TEST_CASE("unknown keys are a hard error") {
    CHECK_THROWS(parse_config(R"({"sedd": 1})"));
    CHECK_THROWS(parse_config(R"({"dqn": {"learning_rte": 0.01}})"));
    CHECK_THROWS(parse_config(R"({"space": [{"name": "x", "low": 0, "high": 1, "step": 1}]})"));
    CHECK_THROWS(parse_config(R"({"loop": {"steps": 10, "warmdown": 2}})"));
}

TEST_CASE("numeric bounds are validated") {
    CHECK_THROWS(parse_config(R"({"dqn": {"discount": 1.5}})"));
    CHECK_THROWS(parse_config(R"({"dqn": {"learning_rate": 0}})"));
    CHECK_THROWS(parse_config(R"({"loop": {"episodes": 0}})"));
    CHECK_THROWS(parse_config(R"({"objectives": []})"));
    CHECK_THROWS(parse_config(R"({"model": {"type": "magic"}})"));
}

TEST_CASE("partial configs inherit defaults") {
    const auto config = parse_config(R"({"seed": 5, "loop": {"steps": 10}})");
    CHECK(config.seed == 5);
    CHECK(config.training.steps_per_episode == 10);
    CHECK(config.training.buffer_capacity == 2000);
    CHECK(config.objectives.size() == 4);
}
