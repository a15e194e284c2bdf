#pragma once

#include <cstdint>
#include <vector>

#include "fadeopt/space.hpp"
#include "fadeopt/surrogate.hpp"

namespace fadeopt {

// Individuals and particles are compared on per-objective absolute errors
// |f_i(s) - p_i| (minimization), not on the raw objective values.
struct Individual {
    StateVector genome;
    std::vector<double> objectives;  // raw model outputs
    std::vector<double> errors;      // |f_i - p_i|
    int rank = 0;
    double crowding = 0.0;
};

// Componentwise <= with at least one strict < on the error vectors.
bool dominates(const std::vector<double>& a, const std::vector<double>& b);

// Front 0 holds individuals dominated by none; front k only by earlier
// fronts. Returns indices into the population.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(
    const std::vector<Individual>& population);

// Standard crowding distance over the error vectors; boundary individuals
// get +infinity, zero-range objectives contribute 0.
std::vector<double> crowding_distance(const std::vector<Individual>& front);

struct Nsga2Settings {
    std::size_t population = 50;
    std::int64_t generations = 100;
    double p_crossover = 0.9;
    double p_mutation = 0.25;
};

struct MopsoSettings {
    std::size_t swarm = 50;
    std::int64_t iterations = 100;
    double inertia = 0.6;
    double c1 = 1.5;
    double c2 = 1.5;
    std::size_t archive_cap = 50;
};

struct BaselineResult {
    std::vector<Individual> front;  // final non-dominated set
    StateVector best_state;
    double best_summed_error = 0.0;
    std::vector<double> best_predictions;
    std::int64_t evaluations = 0;
};

BaselineResult run_nsga2(const ParameterSpace& space, const ObjectiveModel& model,
                         const std::vector<double>& targets, const Nsga2Settings& settings,
                         std::uint64_t seed);

BaselineResult run_mopso(const ParameterSpace& space, const ObjectiveModel& model,
                         const std::vector<double>& targets, const MopsoSettings& settings,
                         std::uint64_t seed);

}  // namespace fadeopt
