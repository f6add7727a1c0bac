#include "boostctl/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "boostctl/parallel.hpp"
#include "boostctl/rng.hpp"
#include "json.hpp"

namespace boostctl {

void PsoConfig::validate() const {
    if (swarm_size < 1 || iterations < 1)
        throw std::invalid_argument("pso config: swarm_size and iterations must be >= 1");
    for (int d = 0; d < 2; ++d)
        if (!(lo[d] < hi[d])) throw std::invalid_argument("pso config: need lo < hi per dim");
}

void GaConfig::validate() const {
    if (population_size < 1 || generations < 1)
        throw std::invalid_argument("ga config: population and generations must be >= 1");
    if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 ||
        mutation_rate > 1.0)
        throw std::invalid_argument("ga config: rates must lie in [0, 1]");
    if (mutation_sigma < 0.0) throw std::invalid_argument("ga config: mutation_sigma < 0");
    if (elitism_count < 0 || elitism_count > population_size)
        throw std::invalid_argument("ga config: elitism_count out of range");
    for (int d = 0; d < 2; ++d)
        if (!(lo[d] < hi[d])) throw std::invalid_argument("ga config: need lo < hi per dim");
}

Point2 pso_velocity_update(const Point2& velocity, const Point2& position, const Point2& p_best,
                           const Point2& g_best, double inertia, double cognitive, double social,
                           const Point2& u1, const Point2& u2, const Point2& lo,
                           const Point2& hi) {
    Point2 v;
    for (int d = 0; d < 2; ++d) {
        const double v_max = 0.2 * (hi[d] - lo[d]);
        double nv = inertia * velocity[d] + cognitive * u1[d] * (p_best[d] - position[d]) +
                    social * u2[d] * (g_best[d] - position[d]);
        v[d] = std::clamp(nv, -v_max, v_max);
    }
    return v;
}

namespace {

std::vector<double> evaluate_all(const std::vector<Point2>& positions, const Objective& objective,
                                 bool parallel) {
    const auto fn = [&](std::size_t i) { return objective(positions[i]); };
    return parallel ? map_parallel(positions.size(), fn) : map_serial(positions.size(), fn);
}

}  // namespace

TuneResult pso_optimize(const PsoConfig& config, const Objective& objective,
                        bool parallel_fitness) {
    config.validate();
    Rng rng(config.seed);
    const int n = config.swarm_size;

    std::vector<Point2> pos(n), vel(n, Point2{0.0, 0.0});
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < 2; ++d) pos[i][d] = rng.uniform(config.lo[d], config.hi[d]);

    std::vector<double> fit = evaluate_all(pos, objective, parallel_fitness);
    std::vector<Point2> p_best = pos;
    std::vector<double> p_best_fit = fit;
    int g = 0;
    for (int i = 1; i < n; ++i)
        if (p_best_fit[i] < p_best_fit[g]) g = i;
    Point2 g_best = p_best[g];
    double g_best_fit = p_best_fit[g];

    TuneResult result;
    result.history.reserve(config.iterations + 1);
    result.history.push_back(g_best_fit);

    for (int iter = 0; iter < config.iterations; ++iter) {
        for (int i = 0; i < n; ++i) {
            const Point2 u1{rng.uniform(), rng.uniform()};
            const Point2 u2{rng.uniform(), rng.uniform()};
            vel[i] = pso_velocity_update(vel[i], pos[i], p_best[i], g_best, config.inertia,
                                         config.cognitive, config.social, u1, u2, config.lo,
                                         config.hi);
            for (int d = 0; d < 2; ++d)
                pos[i][d] = std::clamp(pos[i][d] + vel[i][d], config.lo[d], config.hi[d]);
        }
        fit = evaluate_all(pos, objective, parallel_fitness);
        for (int i = 0; i < n; ++i) {
            if (fit[i] < p_best_fit[i]) {
                p_best_fit[i] = fit[i];
                p_best[i] = pos[i];
            }
            if (fit[i] < g_best_fit) {
                g_best_fit = fit[i];
                g_best = pos[i];
            }
        }
        result.history.push_back(g_best_fit);
    }
    result.best = Candidate{g_best, g_best_fit};
    return result;
}

TuneResult ga_optimize(const GaConfig& config, const Objective& objective,
                       bool parallel_fitness) {
    config.validate();
    Rng rng(config.seed);
    const int n = config.population_size;

    std::vector<Point2> pop(n);
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < 2; ++d) pop[i][d] = rng.uniform(config.lo[d], config.hi[d]);
    std::vector<double> fit = evaluate_all(pop, objective, parallel_fitness);

    int best_idx = 0;
    for (int i = 1; i < n; ++i)
        if (fit[i] < fit[best_idx]) best_idx = i;
    Candidate best_ever{pop[best_idx], fit[best_idx]};

    TuneResult result;
    result.history.reserve(config.generations + 1);
    result.history.push_back(best_ever.fitness);

    const auto tournament = [&]() {
        const int a = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
        const int b = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
        return fit[b] < fit[a] ? b : a;
    };

    for (int gen = 0; gen < config.generations; ++gen) {
        // Rank by fitness; ties keep the lower index.
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fit[a] < fit[b]; });

        std::vector<Point2> next;
        next.reserve(n);
        for (int e = 0; e < config.elitism_count; ++e) next.push_back(pop[order[e]]);

        while (static_cast<int>(next.size()) < n) {
            const int a = tournament();
            Point2 child = pop[a];
            if (rng.uniform() < config.crossover_rate) {
                const int b = tournament();
                for (int d = 0; d < 2; ++d) {
                    const double c_lo = std::min(pop[a][d], pop[b][d]);
                    const double c_hi = std::max(pop[a][d], pop[b][d]);
                    const double span = c_hi - c_lo;
                    child[d] = rng.uniform(c_lo - 0.5 * span, c_hi + 0.5 * span);
                }
            }
            for (int d = 0; d < 2; ++d) {
                if (rng.uniform() < config.mutation_rate)
                    child[d] += rng.normal(0.0, config.mutation_sigma * (config.hi[d] - config.lo[d]));
                child[d] = std::clamp(child[d], config.lo[d], config.hi[d]);
            }
            next.push_back(child);
        }

        pop.swap(next);
        fit = evaluate_all(pop, objective, parallel_fitness);
        for (int i = 0; i < n; ++i) {
            if (fit[i] < best_ever.fitness) best_ever = Candidate{pop[i], fit[i]};
        }
        result.history.push_back(best_ever.fitness);
    }
    result.best = best_ever;
    return result;
}

TuningScenario TuningScenario::standard(double v_ref, const ConverterParams& params,
                                        int horizon_steps) {
    TuningScenario s;
    s.params = params;
    s.spec = EpisodeSpec::regulation(v_ref, InputProfile::fixed(params.v_in_nominal),
                                     horizon_steps);
    return s;
}

double pi_closed_loop_mae(const PiGains& gains, const TuningScenario& scenario) {
    try {
        BoostEnv env(scenario.params, scenario.spec, /*termination_enabled=*/false);
        env.reset();
        PiState pi = pi_reset();
        double err = scenario.spec.v_ref;  // e at t=0, v_out starts at 0
        double abs_sum = scenario.spec.v_ref;
        std::size_t count = 1;
        while (!env.done()) {
            const PiOutput out = pi_step(gains, pi, err, scenario.params.dt,
                                         scenario.params.duty_min, scenario.params.duty_max);
            pi = out.state;
            const auto sr = env.step(out.duty);
            err = sr.obs.error;
            abs_sum += std::abs(err);
            ++count;
        }
        return abs_sum / static_cast<double>(count);
    } catch (const std::runtime_error&) {
        // Numerical blow-up: reject the candidate, keep the run alive.
        return std::numeric_limits<double>::infinity();
    }
}

Objective make_pi_objective(const TuningScenario& scenario) {
    return [scenario](const Point2& gains) {
        return pi_closed_loop_mae(PiGains{gains[0], gains[1]}, scenario);
    };
}

void write_tuner_json(const std::string& path, const std::string& method,
                      const TuneResult& result) {
    nlohmann::json j;
    j["method"] = method;
    j["k_p"] = result.best.position[0];
    j["k_i"] = result.best.position[1];
    j["mae"] = result.best.fitness;
    j["history"] = result.history;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace boostctl
