#include "fadeopt/dqn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fadeopt {

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

}  // namespace

QNetwork::QNetwork(std::size_t inputs, std::size_t hidden, std::size_t outputs,
                   std::uint64_t seed) {
    if (inputs < 1 || hidden < 1 || outputs < 1)
        throw std::invalid_argument("network dimensions must be positive");
    w1_.resize(static_cast<long>(hidden), static_cast<long>(inputs));
    b1_ = Eigen::VectorXd::Zero(static_cast<long>(hidden));
    w2_.resize(static_cast<long>(outputs), static_cast<long>(hidden));
    b2_ = Eigen::VectorXd::Zero(static_cast<long>(outputs));

    // Uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)] per layer.
    Rng rng(seed);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(inputs));
    for (long r = 0; r < w1_.rows(); ++r)
        for (long c = 0; c < w1_.cols(); ++c) w1_(r, c) = (2.0 * rng.uniform01() - 1.0) * s1;
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (long r = 0; r < w2_.rows(); ++r)
        for (long c = 0; c < w2_.cols(); ++c) w2_(r, c) = (2.0 * rng.uniform01() - 1.0) * s2;
}

Eigen::VectorXd QNetwork::forward(const Eigen::VectorXd& features) const {
    if (features.size() != w1_.cols())
        throw std::invalid_argument("network input arity mismatch");
    const Eigen::VectorXd hidden = (w1_ * features + b1_).cwiseMax(0.0);
    return w2_ * hidden + b2_;
}

std::vector<double> QNetwork::forward(const std::vector<double>& features) const {
    const Eigen::VectorXd q = forward(to_eigen(features));
    return {q.data(), q.data() + q.size()};
}

double QNetwork::loss(const std::vector<Eigen::VectorXd>& states,
                      const std::vector<int>& actions,
                      const std::vector<double>& targets) const {
    if (states.empty() || states.size() != actions.size() || states.size() != targets.size())
        throw std::invalid_argument("batch arity mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const double q = forward(states[i])(actions[i]);
        loss += (targets[i] - q) * (targets[i] - q);
    }
    return loss / static_cast<double>(states.size());
}

double QNetwork::gradient_step(const std::vector<Eigen::VectorXd>& states,
                               const std::vector<int>& actions,
                               const std::vector<double>& targets, double learning_rate) {
    if (states.empty() || states.size() != actions.size() || states.size() != targets.size())
        throw std::invalid_argument("batch arity mismatch");
    if (learning_rate <= 0.0) throw std::invalid_argument("learning rate must be positive");

    Eigen::MatrixXd g_w1 = Eigen::MatrixXd::Zero(w1_.rows(), w1_.cols());
    Eigen::VectorXd g_b1 = Eigen::VectorXd::Zero(b1_.size());
    Eigen::MatrixXd g_w2 = Eigen::MatrixXd::Zero(w2_.rows(), w2_.cols());
    Eigen::VectorXd g_b2 = Eigen::VectorXd::Zero(b2_.size());

    const double inv_batch = 1.0 / static_cast<double>(states.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const Eigen::VectorXd& x = states[i];
        const Eigen::VectorXd pre = w1_ * x + b1_;
        const Eigen::VectorXd hidden = pre.cwiseMax(0.0);
        const int a = actions[i];
        const double q = w2_.row(a).dot(hidden) + b2_(a);
        const double err = targets[i] - q;
        loss += err * err;

        // d loss / d q_a = -2 err / B; only the taken action backpropagates.
        const double dq = -2.0 * err * inv_batch;
        g_w2.row(a) += dq * hidden.transpose();
        g_b2(a) += dq;
        Eigen::VectorXd d_hidden = dq * w2_.row(a).transpose();
        for (long h = 0; h < d_hidden.size(); ++h)
            if (pre(h) <= 0.0) d_hidden(h) = 0.0;
        g_w1 += d_hidden * x.transpose();
        g_b1 += d_hidden;
    }

    w1_ -= learning_rate * g_w1;
    b1_ -= learning_rate * g_b1;
    w2_ -= learning_rate * g_w2;
    b2_ -= learning_rate * g_b2;
    return loss * inv_batch;
}

bool QNetwork::operator==(const QNetwork& other) const {
    return w1_ == other.w1_ && b1_ == other.b1_ && w2_ == other.w2_ && b2_ == other.b2_;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity < 1) throw std::invalid_argument("replay capacity must be positive");
    ring_.reserve(capacity);
}

void ReplayBuffer::store(Transition t) {
    if (ring_.size() < capacity_) {
        ring_.push_back(std::move(t));
    } else {
        ring_[cursor_] = std::move(t);
        cursor_ = (cursor_ + 1) % capacity_;
    }
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t k, Rng& rng) const {
    // With-replacement draws only need a non-empty buffer.
    if (ring_.empty() || k == 0)
        throw std::invalid_argument("cannot sample an empty replay buffer");
    std::vector<std::size_t> idx(k);
    for (auto& i : idx) i = static_cast<std::size_t>(rng.below(ring_.size()));
    return idx;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t k, std::uint64_t seed) const {
    Rng rng(seed);
    std::vector<Transition> batch;
    batch.reserve(k);
    for (std::size_t i : sample_indices(k, rng)) batch.push_back(ring_[i]);
    return batch;
}

std::vector<Transition> ReplayBuffer::snapshot() const {
    std::vector<Transition> out;
    out.reserve(ring_.size());
    for (std::size_t i = 0; i < ring_.size(); ++i)
        out.push_back(ring_[(cursor_ + i) % ring_.size()]);
    return out;
}

std::vector<double> td_targets(const std::vector<const Transition*>& batch,
                               const QNetwork& target_net, std::size_t agent_index, double gamma,
                               const ParameterSpace& space) {
    if (batch.empty()) throw std::invalid_argument("td_targets needs a non-empty batch");
    std::vector<double> targets;
    targets.reserve(batch.size());
    for (const Transition* t : batch) {
        const double r = t->rewards.at(agent_index);
        if (t->terminal || gamma == 0.0) {
            targets.push_back(r);
            continue;
        }
        const auto mask = space.feasible_mask(t->next_state);
        const auto q = target_net.forward(space.encode_state(t->next_state));
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < mask.size(); ++a)
            if (mask[a] && q[a] > best) best = q[a];
        targets.push_back(r + gamma * best);
    }
    return targets;
}

}  // namespace fadeopt
