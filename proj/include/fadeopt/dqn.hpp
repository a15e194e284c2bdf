#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fadeopt/rng.hpp"
#include "fadeopt/space.hpp"

namespace fadeopt {

// Two-layer value network: rectified hidden layer, linear output, one
// output per joint action. Gradients are computed by hand.
class QNetwork {
public:
    QNetwork() = default;
    QNetwork(std::size_t inputs, std::size_t hidden, std::size_t outputs, std::uint64_t seed);

    std::size_t num_inputs() const { return static_cast<std::size_t>(w1_.cols()); }
    std::size_t num_hidden() const { return static_cast<std::size_t>(w1_.rows()); }
    std::size_t num_outputs() const { return static_cast<std::size_t>(w2_.rows()); }

    Eigen::VectorXd forward(const Eigen::VectorXd& features) const;
    std::vector<double> forward(const std::vector<double>& features) const;

    // One plain gradient-descent step on the mean squared TD error over the
    // batch. Only the taken action's output carries gradient. Returns the
    // pre-update loss.
    double gradient_step(const std::vector<Eigen::VectorXd>& states,
                         const std::vector<int>& actions, const std::vector<double>& targets,
                         double learning_rate);

    // Accumulates the same gradient without applying it (finite-difference
    // checks and tests).
    double loss(const std::vector<Eigen::VectorXd>& states, const std::vector<int>& actions,
                const std::vector<double>& targets) const;

    Eigen::MatrixXd& w1() { return w1_; }
    Eigen::VectorXd& b1() { return b1_; }
    Eigen::MatrixXd& w2() { return w2_; }
    Eigen::VectorXd& b2() { return b2_; }
    const Eigen::MatrixXd& w1() const { return w1_; }
    const Eigen::VectorXd& b1() const { return b1_; }
    const Eigen::MatrixXd& w2() const { return w2_; }
    const Eigen::VectorXd& b2() const { return b2_; }

    bool operator==(const QNetwork& other) const;

private:
    Eigen::MatrixXd w1_;  // hidden x inputs
    Eigen::VectorXd b1_;
    Eigen::MatrixXd w2_;  // outputs x hidden
    Eigen::VectorXd b2_;
};

// Bit-identical copy used for fixed Q-targets.
inline QNetwork sync_target(const QNetwork& online) { return online; }

struct Transition {
    StateVector state;
    std::int64_t action_index = 0;
    std::vector<double> rewards;  // one component per agent
    StateVector next_state;
    bool terminal = false;
};

// FIFO ring buffer with uniform with-replacement sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return ring_.size(); }
    const Transition& at(std::size_t i) const { return ring_[i]; }

    void store(Transition t);
    std::vector<std::size_t> sample_indices(std::size_t k, Rng& rng) const;
    std::vector<Transition> sample(std::size_t k, std::uint64_t seed) const;

    // Oldest-first view of the contents (test support).
    std::vector<Transition> snapshot() const;

private:
    std::size_t capacity_;
    std::vector<Transition> ring_;
    std::size_t cursor_ = 0;
};

// y = r when terminal, else r + gamma * max over feasible next actions of
// the target network's value.
std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const QNetwork& target_net, std::size_t agent_index, double gamma,
                               const ParameterSpace& space);

}  // namespace fadeopt
