#include <doctest.h>

#include <cmath>

#include "fadeopt/forest.hpp"

using namespace fadeopt;

namespace {

ParameterSpace case_space() {
    return build_space({{"water_content", 0, 150, 50},
                        {"temperature", 0, 100, 10},
                        {"ph", 1, 14, 1},
                        {"time", 1, 60, 1}});
}

Dataset one_feature(const std::vector<std::pair<double, double>>& rows) {
    Dataset data;
    data.input_names = {"x"};
    data.output_names = {"y"};
    for (const auto& [x, y] : rows) {
        data.inputs.push_back({x});
        data.outputs.push_back({y});
    }
    return data;
}

}  // namespace

TEST_CASE("constant targets give constant predictions") {
    const auto data = one_feature({{0, 7}, {1, 7}, {2, 7}, {3, 7}});
    const auto forest = fit_forest(data, 0, 10, 4, 1, 1);
    for (double x : {-1.0, 0.5, 2.0, 10.0})
        CHECK(forest.predict(std::vector<double>{x}) == doctest::Approx(7.0));

    // A duplicated row cannot move a constant-target forest.
    auto dup = data;
    dup.inputs.push_back({1});
    dup.outputs.push_back({7});
    const auto forest2 = fit_forest(dup, 0, 10, 4, 1, 2);
    CHECK(forest2.predict(std::vector<double>{1.5}) == doctest::Approx(7.0));
}

TEST_CASE("depth-1 tree finds the brute-force best split") {
    // Step targets on one feature; rows are replicated so every bootstrap
    // resample keeps both halves.
    std::vector<std::pair<double, double>> rows;
    for (int rep = 0; rep < 10; ++rep)
        for (auto [x, y] :
             std::initializer_list<std::pair<double, double>>{{0, 0}, {1, 0}, {2, 10}, {3, 10}})
            rows.emplace_back(x, y);
    const auto data = one_feature(rows);

    // Brute-force oracle over the 3 candidate thresholds {0.5, 1.5, 2.5}.
    double best_sse = 1e18, best_threshold = 0.0;
    for (double threshold : {0.5, 1.5, 2.5}) {
        double sum_l = 0, n_l = 0, sum_r = 0, n_r = 0;
        for (const auto& [x, y] : rows)
            (x <= threshold ? sum_l : sum_r) += y, (x <= threshold ? n_l : n_r) += 1;
        double sse = 0;
        for (const auto& [x, y] : rows) {
            const double mean = x <= threshold ? sum_l / n_l : sum_r / n_r;
            sse += (y - mean) * (y - mean);
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_threshold = threshold;
        }
    }
    CHECK(best_threshold == 1.5);
    CHECK(best_sse == 0.0);

    const auto forest = fit_forest(data, 0, 1, 1, 1, 42);
    CHECK(forest.num_trees() == 1);
    CHECK(forest.predict(std::vector<double>{1.49}) == doctest::Approx(0.0));
    CHECK(forest.predict(std::vector<double>{1.51}) == doctest::Approx(10.0));
    for (const auto& [x, y] : rows)
        CHECK(forest.predict(std::vector<double>{x}) == doctest::Approx(y));
}

TEST_CASE("predictions stay inside the training-target range") {
    const auto space = case_space();
    const auto data = generate_dataset(space, 100, 0.1, 3);
    const auto forest = fit_forest(data, 1, 30, 8, 1, 9);
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        const double p = forest.predict(space.random_state(rng).values);
        CHECK(p >= forest.min_target());
        CHECK(p <= forest.max_target());
    }
    CHECK_THROWS(forest.predict(std::vector<double>{1.0, 2.0}));
}

TEST_CASE("forests are reproducible per seed") {
    const auto space = case_space();
    const auto data = generate_dataset(space, 80, 0.05, 4);
    const auto a = fit_forest(data, 2, 20, 6, 1, 77);
    const auto b = fit_forest(data, 2, 20, 6, 1, 77);
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        const auto s = space.random_state(rng);
        CHECK(a.predict(s.values) == b.predict(s.values));
    }
}

TEST_CASE("unbounded trees memorize a noiseless dataset") {
    const auto space = case_space();
    const auto data = generate_dataset(space, 120, 0.0, 21);
    ForestModel model(data, 50, 64, 1, 21);
    for (std::size_t out = 0; out < 4; ++out) {
        std::vector<double> pred, truth;
        for (std::size_t i = 0; i < data.size(); ++i) {
            pred.push_back(model.forest(out).predict(data.inputs[i]));
            truth.push_back(data.outputs[i][out]);
        }
        // Bagging keeps each row out of ~37% of the bootstraps, so training
        // R^2 plateaus just below exact memorization.
        CHECK(r_squared(pred, truth) >= 0.98);
    }
}

TEST_CASE("holdout accuracy on the noiseless synthetic task") {
    const auto space = case_space();
    const auto train = generate_dataset(space, 200, 0.0, 31);
    const auto holdout = generate_dataset(space, 100, 0.0, 32);
    ForestModel model(train, 100, 8, 1, 31);
    for (std::size_t out = 0; out < 4; ++out) {
        std::vector<double> pred, truth;
        for (std::size_t i = 0; i < holdout.size(); ++i) {
            pred.push_back(model.forest(out).predict(holdout.inputs[i]));
            truth.push_back(holdout.outputs[i][out]);
        }
        CHECK(r_squared(pred, truth) >= 0.90);
    }
}

TEST_CASE("fit_forest rejects degenerate input") {
    Dataset empty;
    empty.input_names = {"x"};
    empty.output_names = {"y"};
    CHECK_THROWS(fit_forest(empty, 0, 10, 4, 1, 1));
    const auto data = one_feature({{0, 1}});
    CHECK_THROWS(fit_forest(data, 5, 10, 4, 1, 1));
    CHECK_THROWS(fit_forest(data, 0, 0, 4, 1, 1));
}
