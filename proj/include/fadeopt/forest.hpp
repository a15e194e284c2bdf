#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fadeopt/surrogate.hpp"

namespace fadeopt {

// Bagged CART regression forest: axis-aligned variance-reduction splits,
// mean-value leaves, one bootstrap resample per tree keyed by (seed, tree).
class RegressionForest {
public:
    struct Node {
        int feature = -1;        // -1 marks a leaf
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;
    };

    struct Tree {
        std::vector<Node> nodes;
        double predict(const std::vector<double>& x) const;
    };

    std::size_t num_trees() const { return trees_.size(); }
    std::size_t num_features() const { return num_features_; }
    double min_target() const { return min_target_; }
    double max_target() const { return max_target_; }

    double predict(const std::vector<double>& x) const;
    double predict(const StateVector& state) const { return predict(state.values); }

    friend RegressionForest fit_forest(const Dataset&, std::size_t, std::size_t, std::size_t,
                                       std::size_t, std::uint64_t);

private:
    std::vector<Tree> trees_;
    std::size_t num_features_ = 0;
    double min_target_ = 0.0;
    double max_target_ = 0.0;
};

RegressionForest fit_forest(const Dataset& data, std::size_t output_index, std::size_t trees,
                            std::size_t max_depth, std::size_t min_leaf, std::uint64_t seed);

// One forest per output column, wrapped as an ObjectiveModel.
class ForestModel : public ObjectiveModel {
public:
    ForestModel(const Dataset& data, std::size_t trees, std::size_t max_depth,
                std::size_t min_leaf, std::uint64_t seed);

    std::size_t num_objectives() const override { return forests_.size(); }
    std::vector<double> predict(const StateVector& state) const override;
    const RegressionForest& forest(std::size_t i) const { return forests_[i]; }

private:
    std::vector<RegressionForest> forests_;
};

}  // namespace fadeopt
