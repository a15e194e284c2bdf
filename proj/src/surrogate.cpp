#include "fadeopt/surrogate.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "fadeopt/csv.hpp"
#include "fadeopt/rng.hpp"

namespace fadeopt {

std::vector<double> synthetic_ozonation(const StateVector& state) {
    if (state.values.size() != 4)
        throw std::invalid_argument("synthetic model expects 4 process variables");
    const double w = state.values[0] / 150.0;
    const double temp = state.values[1] / 100.0;
    const double ph = (state.values[2] - 1.0) / 13.0;
    const double time = (state.values[3] - 1.0) / 59.0;

    // Fading degree: saturating in time, accelerated by temperature and
    // water content, peaking at neutral-ish pH.
    const double rate = 3.0 * time * (0.4 + 0.6 * temp) * (0.2 + 0.8 * w) *
                        (0.6 + 0.4 * std::sin(std::numbers::pi * ph));
    const double d = 1.0 - std::exp(-rate);

    const double ks = 3.2 * (1.0 - d);
    const double lightness = 12.0 + 55.0 * d;
    const double a_axis = -5.0 - 30.0 * d * (1.0 - 0.5 * ph);
    const double b_axis = -20.0 - 60.0 * d * (0.5 + 0.5 * w);
    return {ks, lightness, a_axis, b_axis};
}

std::vector<double> SyntheticOzonationModel::predict(const StateVector& state) const {
    return synthetic_ozonation(state);
}

Dataset generate_dataset(const ParameterSpace& space, std::size_t count, double noise_sd,
                         std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("dataset needs at least one row");
    if (noise_sd < 0.0) throw std::invalid_argument("noise_sd must be non-negative");
    Dataset data;
    for (const auto& s : space.specs()) data.input_names.push_back(s.name);
    data.output_names = {"k_s", "L_star", "a_star", "b_star"};

    Rng rng(seed);
    data.inputs.reserve(count);
    data.outputs.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        StateVector state = space.random_state(rng);
        std::vector<double> outputs = synthetic_ozonation(state);
        for (double& y : outputs)
            if (noise_sd > 0.0) y += noise_sd * rng.normal();
        data.inputs.push_back(std::move(state.values));
        data.outputs.push_back(std::move(outputs));
    }
    return data;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    std::vector<std::string> header = data.input_names;
    header.insert(header.end(), data.output_names.begin(), data.output_names.end());
    out << join_csv(header) << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::vector<std::string> fields;
        for (double x : data.inputs[i]) fields.push_back(format_real(x));
        for (double y : data.outputs[i]) fields.push_back(format_real(y));
        out << join_csv(fields) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset read_dataset_csv(const std::string& path, std::size_t num_inputs) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
    auto header = split_csv_line(line);
    if (header.size() <= num_inputs)
        throw std::runtime_error("dataset header has no output columns: " + path);

    Dataset data;
    data.input_names.assign(header.begin(), header.begin() + static_cast<long>(num_inputs));
    data.output_names.assign(header.begin() + static_cast<long>(num_inputs), header.end());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("dataset row arity mismatch in " + path);
        std::vector<double> xs, ys;
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const double v = std::stod(fields[j]);
            (j < num_inputs ? xs : ys).push_back(v);
        }
        data.inputs.push_back(std::move(xs));
        data.outputs.push_back(std::move(ys));
    }
    return data;
}

double r_squared(const std::vector<double>& predictions, const std::vector<double>& truth) {
    if (predictions.size() != truth.size() || truth.empty())
        throw std::invalid_argument("r_squared needs equal non-empty vectors");
    double mean = 0.0;
    for (double y : truth) mean += y;
    mean /= static_cast<double>(truth.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ss_res += (truth[i] - predictions[i]) * (truth[i] - predictions[i]);
        ss_tot += (truth[i] - mean) * (truth[i] - mean);
    }
    if (ss_tot == 0.0) throw std::invalid_argument("r_squared undefined for constant truth");
    return 1.0 - ss_res / ss_tot;
}

}  // namespace fadeopt
