#include "fadeopt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fadeopt/rng.hpp"

namespace fadeopt {

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("error vector arity mismatch");
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(
    const std::vector<Individual>& population) {
    if (population.empty()) throw std::invalid_argument("empty population");
    const std::size_t n = population.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(population[p].errors, population[q].errors))
                dominated_by[p].push_back(q);
            else if (dominates(population[q].errors, population[p].errors))
                ++domination_count[p];
        }
        if (domination_count[p] == 0) fronts[0].push_back(p);
    }

    std::size_t k = 0;
    while (!fronts[k].empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts[k])
            for (std::size_t q : dominated_by[p])
                if (--domination_count[q] == 0) next.push_back(q);
        fronts.push_back(std::move(next));
        ++k;
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Individual>& front) {
    if (front.empty()) throw std::invalid_argument("empty front");
    const std::size_t n = front.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> distance(n, 0.0);
    if (n <= 2) return std::vector<double>(n, inf);

    const std::size_t m = front[0].errors.size();
    std::vector<std::size_t> order(n);
    for (std::size_t obj = 0; obj < m; ++obj) {
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return front[a].errors[obj] < front[b].errors[obj];
        });
        const double range = front[order[n - 1]].errors[obj] - front[order[0]].errors[obj];
        distance[order[0]] = inf;
        distance[order[n - 1]] = inf;
        if (range <= 0.0) continue;  // constant objective contributes nothing
        for (std::size_t i = 1; i + 1 < n; ++i)
            distance[order[i]] +=
                (front[order[i + 1]].errors[obj] - front[order[i - 1]].errors[obj]) / range;
    }
    return distance;
}

namespace {

Individual evaluate(const ParameterSpace& space, const ObjectiveModel& model,
                    const std::vector<double>& targets, StateVector genome,
                    std::int64_t& evaluations) {
    Individual ind;
    ind.objectives = model.predict(genome);
    ind.errors.resize(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        ind.errors[i] = std::abs(ind.objectives[i] - targets[i]);
    ind.genome = std::move(genome);
    ++evaluations;
    return ind;
}

double summed(const std::vector<double>& errors) {
    double s = 0.0;
    for (double e : errors) s += e;
    return s;
}

void track_best(BaselineResult& result, const Individual& ind) {
    const double s = summed(ind.errors);
    if (s < result.best_summed_error) {
        result.best_summed_error = s;
        result.best_state = ind.genome;
        result.best_predictions = ind.objectives;
    }
}

// Assigns rank and crowding to every individual in place.
void assign_rank_and_crowding(std::vector<Individual>& population) {
    const auto fronts = fast_nondominated_sort(population);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        std::vector<Individual> front;
        front.reserve(fronts[k].size());
        for (std::size_t i : fronts[k]) front.push_back(population[i]);
        const auto dist = crowding_distance(front);
        for (std::size_t j = 0; j < fronts[k].size(); ++j) {
            population[fronts[k][j]].rank = static_cast<int>(k);
            population[fronts[k][j]].crowding = dist[j];
        }
    }
}

// (rank asc, crowding desc) comparison used by tournament and survival.
bool crowded_less(const Individual& a, const Individual& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.crowding > b.crowding;
}

}  // namespace

BaselineResult run_nsga2(const ParameterSpace& space, const ObjectiveModel& model,
                         const std::vector<double>& targets, const Nsga2Settings& settings,
                         std::uint64_t seed) {
    if (settings.population < 4 || settings.population % 2 != 0)
        throw std::invalid_argument("NSGA-II population must be even and >= 4");
    if (settings.p_crossover < 0.0 || settings.p_crossover > 1.0 || settings.p_mutation < 0.0 ||
        settings.p_mutation > 1.0)
        throw std::invalid_argument("NSGA-II probabilities must lie in [0, 1]");

    Rng rng(sub_seed(seed, "nsga2"));
    BaselineResult result;
    result.best_summed_error = std::numeric_limits<double>::infinity();

    std::vector<Individual> population;
    population.reserve(settings.population);
    for (std::size_t i = 0; i < settings.population; ++i) {
        population.push_back(
            evaluate(space, model, targets, space.random_state(rng), result.evaluations));
        track_best(result, population.back());
    }
    assign_rank_and_crowding(population);

    const std::size_t n_vars = space.num_variables();
    for (std::int64_t gen = 0; gen < settings.generations; ++gen) {
        // Binary tournament on (rank, crowding).
        auto pick_parent = [&]() -> const Individual& {
            const auto a = static_cast<std::size_t>(rng.below(population.size()));
            const auto b = static_cast<std::size_t>(rng.below(population.size()));
            return crowded_less(population[a], population[b]) ? population[a] : population[b];
        };

        std::vector<Individual> offspring;
        offspring.reserve(settings.population);
        while (offspring.size() < settings.population) {
            const Individual& p1 = pick_parent();
            const Individual& p2 = pick_parent();
            StateVector c1 = p1.genome, c2 = p2.genome;
            if (rng.uniform01() < settings.p_crossover) {
                // Per-variable uniform crossover.
                for (std::size_t j = 0; j < n_vars; ++j)
                    if (rng.uniform01() < 0.5) std::swap(c1.values[j], c2.values[j]);
            }
            for (StateVector* child : {&c1, &c2}) {
                // Mutation: one grid step up or down per variable, clamped.
                for (std::size_t j = 0; j < n_vars; ++j) {
                    if (rng.uniform01() >= settings.p_mutation) continue;
                    const auto& s = space.spec(j);
                    const double delta = rng.uniform01() < 0.5 ? -s.unit_step : s.unit_step;
                    child->values[j] =
                        std::clamp(child->values[j] + delta, s.low, s.high);
                }
                if (offspring.size() < settings.population) {
                    offspring.push_back(
                        evaluate(space, model, targets, *child, result.evaluations));
                    track_best(result, offspring.back());
                }
            }
        }

        // Elitist (mu + lambda) survival by rank, then crowding.
        std::vector<Individual> combined = std::move(population);
        combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
                        std::make_move_iterator(offspring.end()));
        assign_rank_and_crowding(combined);

        const auto fronts = fast_nondominated_sort(combined);
        population.clear();
        for (const auto& front : fronts) {
            if (population.size() + front.size() <= settings.population) {
                for (std::size_t i : front) population.push_back(combined[i]);
            } else {
                std::vector<std::size_t> order(front);
                std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    return combined[a].crowding > combined[b].crowding;
                });
                for (std::size_t i : order) {
                    if (population.size() >= settings.population) break;
                    population.push_back(combined[i]);
                }
            }
            if (population.size() >= settings.population) break;
        }
    }

    assign_rank_and_crowding(population);
    for (const auto& ind : population)
        if (ind.rank == 0) result.front.push_back(ind);
    return result;
}

BaselineResult run_mopso(const ParameterSpace& space, const ObjectiveModel& model,
                         const std::vector<double>& targets, const MopsoSettings& settings,
                         std::uint64_t seed) {
    if (settings.swarm < 2) throw std::invalid_argument("MOPSO swarm must be >= 2");
    if (settings.archive_cap < 1) throw std::invalid_argument("archive_cap must be >= 1");

    Rng rng(sub_seed(seed, "mopso"));
    BaselineResult result;
    result.best_summed_error = std::numeric_limits<double>::infinity();

    const std::size_t n_vars = space.num_variables();

    struct Particle {
        std::vector<double> position;
        std::vector<double> velocity;
        Individual snapped;
        Individual personal_best;
    };

    std::vector<Individual> archive;

    auto archive_insert = [&](const Individual& candidate) {
        for (const auto& member : archive)
            if (dominates(member.errors, candidate.errors) || member.errors == candidate.errors)
                return;
        std::erase_if(archive,
                      [&](const Individual& m) { return dominates(candidate.errors, m.errors); });
        archive.push_back(candidate);
        if (archive.size() > settings.archive_cap) {
            // Prune the most crowded entry.
            const auto dist = crowding_distance(archive);
            const auto worst = static_cast<std::size_t>(
                std::min_element(dist.begin(), dist.end()) - dist.begin());
            archive.erase(archive.begin() + static_cast<long>(worst));
        }
    };

    // Leader drawn uniformly from the least-crowded half of the archive.
    auto pick_leader = [&]() -> const Individual& {
        const auto dist = crowding_distance(archive);
        std::vector<std::size_t> order(archive.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return dist[a] > dist[b]; });
        const std::size_t half = (order.size() + 1) / 2;
        return archive[order[static_cast<std::size_t>(rng.below(half))]];
    };

    std::vector<Particle> swarm(settings.swarm);
    for (auto& particle : swarm) {
        const StateVector start = space.random_state(rng);
        particle.position = start.values;
        particle.velocity.assign(n_vars, 0.0);
        particle.snapped = evaluate(space, model, targets, start, result.evaluations);
        particle.personal_best = particle.snapped;
        track_best(result, particle.snapped);
        archive_insert(particle.snapped);
    }

    for (std::int64_t it = 0; it < settings.iterations; ++it) {
        for (auto& particle : swarm) {
            const Individual& leader = pick_leader();
            for (std::size_t j = 0; j < n_vars; ++j) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                particle.velocity[j] =
                    settings.inertia * particle.velocity[j] +
                    settings.c1 * r1 *
                        (particle.personal_best.genome.values[j] - particle.position[j]) +
                    settings.c2 * r2 * (leader.genome.values[j] - particle.position[j]);
                const auto& s = space.spec(j);
                particle.position[j] =
                    std::clamp(particle.position[j] + particle.velocity[j], s.low, s.high);
            }
            particle.snapped = evaluate(space, model, targets, space.snap(particle.position),
                                        result.evaluations);
            track_best(result, particle.snapped);
            archive_insert(particle.snapped);

            // Personal best: replace when dominated; on mutual
            // non-domination keep the lower summed error.
            if (dominates(particle.snapped.errors, particle.personal_best.errors) ||
                (!dominates(particle.personal_best.errors, particle.snapped.errors) &&
                 summed(particle.snapped.errors) < summed(particle.personal_best.errors)))
                particle.personal_best = particle.snapped;
        }
    }

    result.front = archive;
    return result;
}

}  // namespace fadeopt
