#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fadeopt/baselines.hpp"
#include "fadeopt/marl.hpp"

using namespace fadeopt;

namespace {

// Two-variable toy model with a planted optimum at (3, 7).
class ToyModel : public ObjectiveModel {
public:
    std::size_t num_objectives() const override { return 2; }
    std::vector<double> predict(const StateVector& s) const override {
        return {s.values[0] + 0.1 * s.values[1], s.values[1] - 0.2 * s.values[0]};
    }
};

ParameterSpace toy_space() {
    return build_space({{"x", 0, 10, 1}, {"y", 0, 10, 1}});
}

std::vector<double> toy_targets() {
    ToyModel model;
    return model.predict(StateVector{{3, 7}});
}

Individual make_ind(std::vector<double> errors) {
    Individual ind;
    ind.errors = std::move(errors);
    ind.objectives = ind.errors;
    return ind;
}

// O(N^2) pairwise re-check of a front partition.
void check_fronts(const std::vector<Individual>& pop,
                  const std::vector<std::vector<std::size_t>>& fronts) {
    std::vector<int> rank(pop.size(), -1);
    std::size_t total = 0;
    for (std::size_t k = 0; k < fronts.size(); ++k)
        for (std::size_t i : fronts[k]) {
            rank[i] = static_cast<int>(k);
            ++total;
        }
    REQUIRE(total == pop.size());
    for (std::size_t p = 0; p < pop.size(); ++p) {
        int worst_dominator = -1;
        for (std::size_t q = 0; q < pop.size(); ++q)
            if (p != q && dominates(pop[q].errors, pop[p].errors))
                worst_dominator = std::max(worst_dominator, rank[q]);
        CHECK(rank[p] == worst_dominator + 1);
    }
}

}  // namespace

TEST_CASE("dominates on error vectors") {
    CHECK_FALSE(dominates({1, 2}, {1, 2}));
    CHECK(dominates({0, 1}, {1, 2}));
    CHECK(dominates({1, 1}, {1, 2}));
    CHECK_FALSE(dominates({0, 3}, {1, 2}));
    CHECK_THROWS(dominates({1}, {1, 2}));
}

TEST_CASE("domination is irreflexive and transitive") {
    Rng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::vector<double>> v(3, std::vector<double>(3));
        for (auto& e : v)
            for (auto& x : e) x = std::floor(rng.uniform01() * 4);
        CHECK_FALSE(dominates(v[0], v[0]));
        if (dominates(v[0], v[1]) && dominates(v[1], v[2])) CHECK(dominates(v[0], v[2]));
    }
}

TEST_CASE("fast_nondominated_sort against the pairwise oracle") {
    CHECK(fast_nondominated_sort({make_ind({1, 2})}).size() == 1);

    const std::vector<Individual> two{make_ind({0, 2}), make_ind({2, 0})};
    const auto fronts2 = fast_nondominated_sort(two);
    REQUIRE(fronts2.size() == 1);
    CHECK(fronts2[0].size() == 2);

    Rng rng(5);
    std::vector<Individual> pop;
    for (int i = 0; i < 50; ++i)
        pop.push_back(make_ind({std::floor(rng.uniform01() * 5),
                                std::floor(rng.uniform01() * 5),
                                std::floor(rng.uniform01() * 5)}));
    check_fronts(pop, fast_nondominated_sort(pop));
}

TEST_CASE("front partition is stable under permutation") {
    Rng rng(6);
    std::vector<Individual> pop;
    for (int i = 0; i < 30; ++i)
        pop.push_back(make_ind({rng.uniform01(), rng.uniform01()}));
    const auto fronts = fast_nondominated_sort(pop);

    std::vector<std::size_t> perm(pop.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    for (std::size_t i = perm.size(); i-- > 1;)
        std::swap(perm[i], perm[rng.below(i + 1)]);
    std::vector<Individual> shuffled;
    for (std::size_t i : perm) shuffled.push_back(pop[i]);
    const auto fronts2 = fast_nondominated_sort(shuffled);

    std::vector<int> rank1(pop.size()), rank2(pop.size());
    for (std::size_t k = 0; k < fronts.size(); ++k)
        for (std::size_t i : fronts[k]) rank1[i] = static_cast<int>(k);
    for (std::size_t k = 0; k < fronts2.size(); ++k)
        for (std::size_t i : fronts2[k]) rank2[perm[i]] = static_cast<int>(k);
    CHECK(rank1 == rank2);
}

TEST_CASE("crowding distance") {
    const auto tiny = crowding_distance({make_ind({1, 2}), make_ind({2, 1})});
    for (double d : tiny) CHECK(std::isinf(d));

    // Three collinear equally spaced points in 2 objectives: the middle one
    // accumulates (2-0)/2 per objective = 2 total.
    const auto three =
        crowding_distance({make_ind({0, 0}), make_ind({1, 1}), make_ind({2, 2})});
    CHECK(std::isinf(three[0]));
    CHECK(std::isinf(three[2]));
    CHECK(three[1] == doctest::Approx(2.0));

    // Duplicated vectors stay finite and defined.
    const auto dup = crowding_distance(
        {make_ind({1, 1}), make_ind({1, 1}), make_ind({1, 1}), make_ind({1, 1})});
    for (double d : dup) CHECK(d == d);  // no NaN
}

TEST_CASE("NSGA-II reaches a planted optimum on the toy grid") {
    const auto space = toy_space();
    ToyModel model;
    Nsga2Settings settings;
    settings.population = 20;
    settings.generations = 60;
    const auto result = run_nsga2(space, model, toy_targets(), settings, 3);
    CHECK(result.best_summed_error == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(result.best_state == StateVector{{3, 7}});

    // Final front re-checked by the pairwise oracle.
    const auto fronts = fast_nondominated_sort(result.front);
    CHECK(fronts.size() == 1);
    for (const auto& ind : result.front) CHECK(space.contains(ind.genome));
}

TEST_CASE("NSGA-II with no variation never changes a uniform population") {
    const auto space = toy_space();
    ToyModel model;
    Nsga2Settings settings;
    settings.population = 8;
    settings.generations = 5;
    settings.p_crossover = 0.0;
    settings.p_mutation = 0.0;
    // With zero variation every offspring clones a parent, so the best can
    // never improve past the best initial genome.
    const auto result = run_nsga2(space, model, toy_targets(), settings, 4);
    std::vector<std::vector<double>> distinct;
    for (const auto& ind : result.front) {
        if (std::find(distinct.begin(), distinct.end(), ind.genome.values) == distinct.end())
            distinct.push_back(ind.genome.values);
    }
    // All survivors must come from the 8 initial genomes.
    CHECK(distinct.size() <= 8);
}

TEST_CASE("NSGA-II validates settings") {
    const auto space = toy_space();
    ToyModel model;
    Nsga2Settings bad;
    bad.population = 3;
    CHECK_THROWS(run_nsga2(space, model, toy_targets(), bad, 1));
    bad.population = 7;
    CHECK_THROWS(run_nsga2(space, model, toy_targets(), bad, 1));
}

TEST_CASE("MOPSO with zero coefficients never moves") {
    const auto space = toy_space();
    ToyModel model;
    MopsoSettings settings;
    settings.swarm = 6;
    settings.iterations = 10;
    settings.inertia = 0.0;
    settings.c1 = 0.0;
    settings.c2 = 0.0;
    const auto frozen = run_mopso(space, model, toy_targets(), settings, 5);
    // 6 initial + 6 per iteration evaluations, but positions are frozen, so
    // the best equals the best initial snap.
    MopsoSettings init_only = settings;
    init_only.iterations = 0;
    const auto start = run_mopso(space, model, toy_targets(), init_only, 5);
    CHECK(frozen.best_summed_error == start.best_summed_error);
    CHECK(frozen.best_state == start.best_state);
}

TEST_CASE("MOPSO archive never holds a dominated entry") {
    const auto space = toy_space();
    ToyModel model;
    MopsoSettings settings;
    settings.swarm = 12;
    settings.iterations = 40;
    settings.archive_cap = 10;
    const auto result = run_mopso(space, model, toy_targets(), settings, 6);
    CHECK(result.front.size() <= 10);
    for (const auto& a : result.front) {
        CHECK(space.contains(a.genome));
        for (const auto& b : result.front)
            CHECK_FALSE((&a != &b && dominates(a.errors, b.errors)));
    }
}

TEST_CASE("MOPSO reaches a planted optimum on the toy grid") {
    const auto space = toy_space();
    ToyModel model;
    MopsoSettings settings;
    settings.swarm = 20;
    settings.iterations = 200;
    const auto result = run_mopso(space, model, toy_targets(), settings, 7);
    CHECK(result.best_summed_error == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("baselines are reproducible per seed") {
    const auto space = toy_space();
    ToyModel model;
    Nsga2Settings ns;
    ns.population = 12;
    ns.generations = 20;
    const auto a = run_nsga2(space, model, toy_targets(), ns, 42);
    const auto b = run_nsga2(space, model, toy_targets(), ns, 42);
    CHECK(a.best_state == b.best_state);
    CHECK(a.best_summed_error == b.best_summed_error);
    CHECK(a.evaluations == b.evaluations);

    MopsoSettings ms;
    ms.swarm = 10;
    ms.iterations = 30;
    const auto c = run_mopso(space, model, toy_targets(), ms, 42);
    const auto d = run_mopso(space, model, toy_targets(), ms, 42);
    CHECK(c.best_state == d.best_state);
    CHECK(c.best_summed_error == d.best_summed_error);
}
