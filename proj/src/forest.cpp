#include "fadeopt/forest.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fadeopt/rng.hpp"

namespace fadeopt {

namespace {

struct Sample {
    const std::vector<double>* x;
    double y;
};

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

double mean_target(const std::vector<Sample>& samples, const std::vector<std::size_t>& idx) {
    double sum = 0.0;
    for (std::size_t i : idx) sum += samples[i].y;
    return sum / static_cast<double>(idx.size());
}

// Best variance-reduction split over all features; candidates are midpoints
// between consecutive distinct sorted values. Ties break to the lower
// feature index, then the lower threshold.
Split best_split(const std::vector<Sample>& samples, std::vector<std::size_t>& idx,
                 std::size_t num_features, std::size_t min_leaf) {
    Split best;
    const auto n = idx.size();
    std::vector<std::size_t> order(idx);
    for (std::size_t f = 0; f < num_features; ++f) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return (*samples[a].x)[f] < (*samples[b].x)[f];
        });
        // Prefix sums of y and y^2 in sorted order.
        double left_sum = 0.0, total_sum = 0.0;
        for (std::size_t i : order) total_sum += samples[i].y;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            left_sum += samples[order[k]].y;
            const double lo = (*samples[order[k]].x)[f];
            const double hi = (*samples[order[k + 1]].x)[f];
            if (lo == hi) continue;
            const std::size_t nl = k + 1, nr = n - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            const double right_sum = total_sum - left_sum;
            // SSE reduction up to a constant: sumL^2/nL + sumR^2/nR.
            const double score = left_sum * left_sum / static_cast<double>(nl) +
                                 right_sum * right_sum / static_cast<double>(nr);
            const double base = total_sum * total_sum / static_cast<double>(n);
            const double gain = score - base;
            const double threshold = (lo + hi) / 2.0;
            // Features and thresholds scan in ascending order, so keeping
            // only strict improvements breaks ties to the lower feature
            // index, then the lower threshold.
            if (gain > best.gain + 1e-12 && gain > 1e-12)
                best = {static_cast<int>(f), threshold, gain};
        }
    }
    return best;
}

std::int32_t grow(RegressionForest::Tree& tree, const std::vector<Sample>& samples,
                  std::vector<std::size_t> idx, std::size_t depth, std::size_t max_depth,
                  std::size_t min_leaf, std::size_t num_features) {
    RegressionForest::Node node;
    node.value = mean_target(samples, idx);
    const auto self = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back(node);
    if (depth >= max_depth || idx.size() < 2 * min_leaf) return self;

    Split split = best_split(samples, idx, num_features, min_leaf);
    if (split.feature < 0) return self;

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx)
        ((*samples[i].x)[static_cast<std::size_t>(split.feature)] <= split.threshold ? left
                                                                                     : right)
            .push_back(i);
    if (left.empty() || right.empty()) return self;

    tree.nodes[static_cast<std::size_t>(self)].feature = split.feature;
    tree.nodes[static_cast<std::size_t>(self)].threshold = split.threshold;
    const auto l = grow(tree, samples, std::move(left), depth + 1, max_depth, min_leaf,
                        num_features);
    const auto r = grow(tree, samples, std::move(right), depth + 1, max_depth, min_leaf,
                        num_features);
    tree.nodes[static_cast<std::size_t>(self)].left = l;
    tree.nodes[static_cast<std::size_t>(self)].right = r;
    return self;
}

}  // namespace

double RegressionForest::Tree::predict(const std::vector<double>& x) const {
    std::int32_t at = 0;
    for (;;) {
        const Node& node = nodes[static_cast<std::size_t>(at)];
        if (node.feature < 0 || node.left < 0) return node.value;
        at = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
    }
}

double RegressionForest::predict(const std::vector<double>& x) const {
    if (x.size() != num_features_)
        throw std::invalid_argument("forest input arity mismatch");
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict(x);
    return sum / static_cast<double>(trees_.size());
}

RegressionForest fit_forest(const Dataset& data, std::size_t output_index, std::size_t trees,
                            std::size_t max_depth, std::size_t min_leaf, std::uint64_t seed) {
    if (data.size() == 0) throw std::invalid_argument("cannot fit a forest on empty data");
    if (output_index >= data.output_names.size())
        throw std::invalid_argument("output index out of range");
    if (trees < 1 || min_leaf < 1) throw std::invalid_argument("trees and min_leaf must be >= 1");

    const std::size_t rows = data.size();
    std::vector<Sample> samples(rows);
    RegressionForest forest;
    forest.num_features_ = data.input_names.size();
    forest.min_target_ = std::numeric_limits<double>::infinity();
    forest.max_target_ = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
        samples[i] = {&data.inputs[i], data.outputs[i][output_index]};
        forest.min_target_ = std::min(forest.min_target_, samples[i].y);
        forest.max_target_ = std::max(forest.max_target_, samples[i].y);
    }

    forest.trees_.resize(trees);
    for (std::size_t t = 0; t < trees; ++t) {
        // Bootstrap keyed by (seed, tree index) so fit order never matters.
        Rng rng(sub_seed(seed, "tree/" + std::to_string(t)));
        std::vector<std::size_t> idx(rows);
        for (auto& i : idx) i = static_cast<std::size_t>(rng.below(rows));
        std::sort(idx.begin(), idx.end());
        grow(forest.trees_[t], samples, std::move(idx), 0, max_depth, min_leaf,
             forest.num_features_);
    }
    return forest;
}

ForestModel::ForestModel(const Dataset& data, std::size_t trees, std::size_t max_depth,
                         std::size_t min_leaf, std::uint64_t seed) {
    for (std::size_t i = 0; i < data.output_names.size(); ++i)
        forests_.push_back(fit_forest(data, i, trees, max_depth, min_leaf,
                                      sub_seed(seed, "output/" + std::to_string(i))));
}

std::vector<double> ForestModel::predict(const StateVector& state) const {
    std::vector<double> out;
    out.reserve(forests_.size());
    for (const auto& forest : forests_) out.push_back(forest.predict(state.values));
    return out;
}

}  // namespace fadeopt
