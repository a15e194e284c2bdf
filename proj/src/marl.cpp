#include "fadeopt/marl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "fadeopt/csv.hpp"
#include "fadeopt/tabular.hpp"

namespace fadeopt {

EpsilonSchedule::EpsilonSchedule(double increment, double eps_max)
    : increment_(increment), eps_max_(eps_max) {
    if (increment < 0.0 || eps_max < 0.0 || eps_max > 1.0)
        throw std::invalid_argument("invalid epsilon schedule");
}

double EpsilonSchedule::current() const {
    return std::min(increment_ * static_cast<double>(steps_), eps_max_);
}

double reward(double f_now, double f_next, double target) {
    return std::abs(f_now - target) - std::abs(f_next - target);
}

std::int64_t utilitarian_select(const std::vector<std::vector<double>>& q_per_agent,
                                const std::vector<char>& mask) {
    if (q_per_agent.empty()) throw std::invalid_argument("no agents");
    std::int64_t best = -1;
    double best_sum = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < mask.size(); ++a) {
        if (!mask[a]) continue;
        double sum = 0.0;
        for (const auto& q : q_per_agent) sum += q[a];
        if (sum > best_sum) {
            best_sum = sum;
            best = static_cast<std::int64_t>(a);
        }
    }
    if (best < 0) throw std::invalid_argument("no feasible action in mask");
    return best;
}

std::int64_t epsilon_choose(double eps, std::int64_t greedy_index,
                            const std::vector<char>& mask, Rng& rng) {
    if (rng.uniform01() < eps) return greedy_index;
    std::vector<std::int64_t> feasible;
    for (std::size_t a = 0; a < mask.size(); ++a)
        if (mask[a]) feasible.push_back(static_cast<std::int64_t>(a));
    if (feasible.empty()) throw std::invalid_argument("no feasible action in mask");
    return feasible[static_cast<std::size_t>(rng.below(feasible.size()))];
}

AgentEnsemble make_ensemble(const ParameterSpace& space,
                            const std::vector<std::string>& objective_names,
                            const std::vector<double>& targets, const TrainingSettings& settings,
                            std::uint64_t seed) {
    if (objective_names.size() != targets.size() || targets.empty())
        throw std::invalid_argument("objective names and targets must align");
    std::vector<Agent> agents;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        Agent agent;
        agent.objective_name = objective_names[i];
        agent.target = targets[i];
        agent.online = QNetwork(space.num_variables(), settings.hidden,
                                static_cast<std::size_t>(space.action_count()),
                                sub_seed(seed, "agent/" + std::to_string(i)));
        agent.target_net = sync_target(agent.online);
        agents.push_back(std::move(agent));
    }
    return AgentEnsemble(std::move(agents), settings.buffer_capacity);
}

namespace {

Eigen::VectorXd encode(const ParameterSpace& space, const StateVector& state) {
    const auto v = space.encode_state(state);
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

double summed_error(const std::vector<double>& predictions, const AgentEnsemble& ensemble) {
    double sum = 0.0;
    for (std::size_t i = 0; i < ensemble.num_agents(); ++i)
        sum += std::abs(predictions[i] - ensemble.agents[i].target);
    return sum;
}

}  // namespace

RunLog run_training(const TrainingSettings& settings, const ParameterSpace& space,
                    const ObjectiveModel& model, AgentEnsemble& ensemble, std::uint64_t seed) {
    const std::size_t m = ensemble.num_agents();
    if (model.num_objectives() != m)
        throw std::invalid_argument("objective model arity does not match the agent count");

    Rng env_rng(sub_seed(seed, "env"));
    Rng sample_rng(sub_seed(seed, "replay"));
    EpsilonSchedule schedule(settings.epsilon_increment, settings.epsilon_max);

    RunLog log;
    for (const auto& agent : ensemble.agents) log.objective_names.push_back(agent.objective_name);
    log.best_summed_error = std::numeric_limits<double>::infinity();
    std::vector<double> min_errors(m, std::numeric_limits<double>::infinity());
    double min_sum = std::numeric_limits<double>::infinity();

    std::int64_t env_step = 0;
    std::int64_t grad_steps = 0;

    for (std::int64_t episode = 1; episode <= settings.episodes; ++episode) {
        StateVector state = space.random_state(env_rng);
        std::vector<double> f_now = model.predict(state);

        for (std::int64_t t = 1; t <= settings.steps_per_episode; ++t) {
            ++env_step;
            schedule.step();
            const double eps = schedule.current();

            const auto mask = space.feasible_mask(state);
            const Eigen::VectorXd features = encode(space, state);
            std::vector<std::vector<double>> q_per_agent(m);
            for (std::size_t i = 0; i < m; ++i) {
                const Eigen::VectorXd q = ensemble.agents[i].online.forward(features);
                q_per_agent[i].assign(q.data(), q.data() + q.size());
            }
            const std::int64_t greedy = utilitarian_select(q_per_agent, mask);
            const std::int64_t action = epsilon_choose(eps, greedy, mask, env_rng);

            const StateVector next_state = space.apply_action(state, action);
            const std::vector<double> f_next = model.predict(next_state);

            Transition transition;
            transition.state = state;
            transition.action_index = action;
            transition.next_state = next_state;
            transition.rewards.resize(m);
            for (std::size_t i = 0; i < m; ++i)
                transition.rewards[i] =
                    reward(f_now[i], f_next[i], ensemble.agents[i].target);
            const double next_sum = summed_error(f_next, ensemble);
            transition.terminal =
                settings.stop_threshold && next_sum <= *settings.stop_threshold;
            ensemble.buffer.store(transition);

            // Learning: after the replay warm-up, one gradient step per
            // environment step per agent; target reset every sync_period
            // gradient steps.
            std::vector<double> losses(m, 0.0);
            if (env_step > settings.warmup_steps &&
                ensemble.buffer.size() >= settings.batch_size) {
                const auto idx = ensemble.buffer.sample_indices(settings.batch_size, sample_rng);
                std::vector<const Transition*> batch;
                std::vector<Eigen::VectorXd> batch_states;
                std::vector<int> batch_actions;
                batch.reserve(idx.size());
                for (std::size_t k : idx) {
                    const Transition& tr = ensemble.buffer.at(k);
                    batch.push_back(&tr);
                    batch_states.push_back(encode(space, tr.state));
                    batch_actions.push_back(static_cast<int>(tr.action_index));
                }
                for (std::size_t i = 0; i < m; ++i) {
                    const auto targets = td_targets(batch, ensemble.agents[i].target_net, i,
                                                    settings.discount, space);
                    losses[i] = ensemble.agents[i].online.gradient_step(
                        batch_states, batch_actions, targets, settings.learning_rate);
                }
                ++grad_steps;
                if (grad_steps % settings.sync_period == 0)
                    for (auto& agent : ensemble.agents)
                        agent.target_net = sync_target(agent.online);
            }

            StepRecord rec;
            rec.step = env_step;
            rec.episode = episode;
            rec.epsilon = eps;
            rec.action_index = action;
            rec.state = next_state;
            rec.rewards = transition.rewards;
            rec.losses = losses;
            rec.abs_errors.resize(m);
            rec.min_abs_errors.resize(m);
            for (std::size_t i = 0; i < m; ++i) {
                rec.abs_errors[i] = std::abs(f_next[i] - ensemble.agents[i].target);
                min_errors[i] = std::min(min_errors[i], rec.abs_errors[i]);
                rec.min_abs_errors[i] = min_errors[i];
            }
            rec.summed_error = next_sum;
            min_sum = std::min(min_sum, next_sum);
            rec.min_summed_error = min_sum;
            log.records.push_back(std::move(rec));

            if (next_sum < log.best_summed_error) {
                log.best_summed_error = next_sum;
                log.best_state = next_state;
                log.best_predictions = f_next;
            }

            if (transition.terminal) {
                // Success-termination: re-randomize and keep stepping so the
                // run still executes exactly E*N environment steps.
                state = space.random_state(env_rng);
                f_now = model.predict(state);
            } else {
                state = next_state;
                f_now = f_next;
            }
        }
    }

    return log;
}

void write_run_log_csv(const RunLog& log, const ParameterSpace& space, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    std::vector<std::string> header = {"step", "episode", "epsilon", "action_index"};
    for (const auto& s : space.specs()) header.push_back(s.name);
    for (const auto& name : log.objective_names) header.push_back("reward_" + name);
    for (const auto& name : log.objective_names) header.push_back("loss_" + name);
    for (const auto& name : log.objective_names) header.push_back("abs_error_" + name);
    for (const auto& name : log.objective_names) header.push_back("min_abs_error_" + name);
    header.push_back("summed_error");
    header.push_back("min_summed_error");
    out << join_csv(header) << '\n';
    for (const auto& rec : log.records) {
        std::vector<std::string> fields = {std::to_string(rec.step), std::to_string(rec.episode),
                                           format_real(rec.epsilon),
                                           std::to_string(rec.action_index)};
        for (double v : rec.state.values) fields.push_back(format_real(v));
        for (double v : rec.rewards) fields.push_back(format_real(v));
        for (double v : rec.losses) fields.push_back(format_real(v));
        for (double v : rec.abs_errors) fields.push_back(format_real(v));
        for (double v : rec.min_abs_errors) fields.push_back(format_real(v));
        fields.push_back(format_real(rec.summed_error));
        fields.push_back(format_real(rec.min_summed_error));
        out << join_csv(fields) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

BruteForceResult brute_force_optimum(const ParameterSpace& space, const ObjectiveModel& model,
                                     const std::vector<double>& targets) {
    // Exhaustive search stays practical well past the tabular-oracle cap; the
    // case-study grid (36,960 states) must always be enumerable.  The
    // environment override still wins when present.
    const auto cap = std::getenv("FADEOPT_MAX_GRID") != nullptr ? grid_enumeration_cap()
                                                                : kBruteForceGridCap;
    if (space.grid_cardinality() > cap)
        throw std::invalid_argument("grid cardinality exceeds the enumeration cap");
    if (targets.size() != model.num_objectives())
        throw std::invalid_argument("target arity does not match the model");

    BruteForceResult result;
    result.summed_error = std::numeric_limits<double>::infinity();
    std::vector<double> all_errors;
    all_errors.reserve(static_cast<std::size_t>(space.grid_cardinality()));
    for (std::int64_t s = 0; s < space.grid_cardinality(); ++s) {
        const StateVector state = space.state_from_index(s);
        const auto f = model.predict(state);
        double sum = 0.0;
        for (std::size_t i = 0; i < targets.size(); ++i) sum += std::abs(f[i] - targets[i]);
        all_errors.push_back(sum);
        // Ascending enumeration is lexicographic, so strict < keeps the
        // lexicographically smallest tie.
        if (sum < result.summed_error) {
            result.summed_error = sum;
            result.state = state;
            result.predictions = f;
        }
    }
    std::sort(all_errors.begin(), all_errors.end());
    const std::size_t n = all_errors.size();
    result.median_summed_error =
        n % 2 ? all_errors[n / 2] : 0.5 * (all_errors[n / 2 - 1] + all_errors[n / 2]);
    return result;
}

double deviation_check(const AgentEnsemble& ensemble, const std::vector<StateVector>& states,
                       const ParameterSpace& space) {
    double max_regret = -std::numeric_limits<double>::infinity();
    for (const auto& state : states) {
        const auto mask = space.feasible_mask(state);
        const Eigen::VectorXd features = encode(space, state);
        std::vector<std::vector<double>> q_per_agent(ensemble.num_agents());
        for (std::size_t i = 0; i < ensemble.num_agents(); ++i) {
            const Eigen::VectorXd q = ensemble.agents[i].online.forward(features);
            q_per_agent[i].assign(q.data(), q.data() + q.size());
        }
        const auto chosen = static_cast<std::size_t>(utilitarian_select(q_per_agent, mask));
        for (const auto& q : q_per_agent)
            for (std::size_t a = 0; a < mask.size(); ++a)
                if (mask[a]) max_regret = std::max(max_regret, q[a] - q[chosen]);
    }
    return max_regret;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (long r = 0; r < m.rows(); ++r)
        for (long c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    j["data"] = data;
    return j;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
    const long rows = j.at("rows");
    const long cols = j.at("cols");
    const std::vector<double> data = j.at("data");
    if (static_cast<long>(data.size()) != rows * cols)
        throw std::runtime_error("checkpoint matrix shape mismatch");
    Eigen::MatrixXd m(rows, cols);
    std::size_t k = 0;
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) m(r, c) = data[k++];
    return m;
}

nlohmann::json network_to_json(const QNetwork& net) {
    nlohmann::json j;
    j["w1"] = matrix_to_json(net.w1());
    j["b1"] = matrix_to_json(net.b1());
    j["w2"] = matrix_to_json(net.w2());
    j["b2"] = matrix_to_json(net.b2());
    return j;
}

void network_from_json(const nlohmann::json& j, QNetwork& net) {
    net.w1() = matrix_from_json(j.at("w1"));
    net.b1() = matrix_from_json(j.at("b1"));
    net.w2() = matrix_from_json(j.at("w2"));
    net.b2() = matrix_from_json(j.at("b2"));
}

}  // namespace

void save_checkpoint(const AgentEnsemble& ensemble, std::int64_t step,
                     const EpsilonSchedule& schedule, const std::string& path) {
    nlohmann::json j;
    j["step"] = step;
    j["epsilon"] = schedule.current();
    j["epsilon_steps"] = schedule.steps();
    j["agents"] = nlohmann::json::array();
    for (const auto& agent : ensemble.agents) {
        nlohmann::json a;
        a["objective"] = agent.objective_name;
        a["target"] = agent.target;
        a["online"] = network_to_json(agent.online);
        a["target_net"] = network_to_json(agent.target_net);
        j["agents"].push_back(std::move(a));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

void load_checkpoint(AgentEnsemble& ensemble, std::int64_t& step, EpsilonSchedule& schedule,
                     const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    in >> j;
    step = j.at("step");
    schedule.restore(j.at("epsilon_steps"));
    const auto& agents = j.at("agents");
    if (agents.size() != ensemble.num_agents())
        throw std::runtime_error("checkpoint agent count mismatch");
    for (std::size_t i = 0; i < ensemble.num_agents(); ++i) {
        network_from_json(agents[i].at("online"), ensemble.agents[i].online);
        network_from_json(agents[i].at("target_net"), ensemble.agents[i].target_net);
    }
}

}  // namespace fadeopt
