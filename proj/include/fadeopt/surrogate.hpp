#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fadeopt/space.hpp"

namespace fadeopt {

// Objective functions f_1..f_m evaluated at a grid state.
class ObjectiveModel {
public:
    virtual ~ObjectiveModel() = default;
    virtual std::size_t num_objectives() const = 0;
    virtual std::vector<double> predict(const StateVector& state) const = 0;
};

// Analytic stand-in for the ozonation color-fading process. Maps
// (water content, temperature, pH, time) to (k/s, L*, a*, b*) through a
// saturating fading degree d in [0, 1). Constants are fixed so every test
// value is reproducible.
class SyntheticOzonationModel : public ObjectiveModel {
public:
    std::size_t num_objectives() const override { return 4; }
    std::vector<double> predict(const StateVector& state) const override;
};

std::vector<double> synthetic_ozonation(const StateVector& state);

struct Dataset {
    std::vector<std::string> input_names;
    std::vector<std::string> output_names;
    std::vector<std::vector<double>> inputs;   // rows x n
    std::vector<std::vector<double>> outputs;  // rows x m

    std::size_t size() const { return inputs.size(); }
};

// Draws `count` states uniformly from the grid and records the synthetic
// model's outputs plus optional Gaussian noise. Reproducible per seed.
Dataset generate_dataset(const ParameterSpace& space, std::size_t count, double noise_sd,
                         std::uint64_t seed);

void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path, std::size_t num_inputs);

// 1 - SS_res / SS_tot. Throws if truth has zero variance.
double r_squared(const std::vector<double>& predictions, const std::vector<double>& truth);

}  // namespace fadeopt
