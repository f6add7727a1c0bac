#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "boostctl/env.hpp"
#include "boostctl/pi.hpp"

namespace boostctl {

using Point2 = std::array<double, 2>;  // (kp, ki)

struct Candidate {
    Point2 position{0.0, 0.0};
    double fitness = 0.0;  // MAE in volts, lower is better
};

struct PsoConfig {
    int swarm_size = 20;
    int iterations = 50;
    double inertia = 0.7;
    double cognitive = 1.5;
    double social = 1.5;
    Point2 lo{0.0, 0.0};
    Point2 hi{0.05, 2.0};
    std::uint64_t seed = 0;

    void validate() const;
};

struct GaConfig {
    int population_size = 30;
    int generations = 60;
    double crossover_rate = 0.9;
    double mutation_rate = 0.2;
    double mutation_sigma = 0.1;  // fraction of the per-dimension range
    int elitism_count = 2;
    Point2 lo{0.0, 0.0};
    Point2 hi{0.05, 2.0};
    std::uint64_t seed = 0;

    void validate() const;
};

using Objective = std::function<double(const Point2&)>;

struct TuneResult {
    Candidate best;
    std::vector<double> history;  // best fitness after init and each iteration
};

// v' = w v + c1 u1 (p_best - x) + c2 u2 (g_best - x), componentwise, then
// clamped to +-0.2*(hi-lo) per dimension. u1/u2 are the uniform draws for this
// particle and step, one per component.
Point2 pso_velocity_update(const Point2& velocity, const Point2& position, const Point2& p_best,
                           const Point2& g_best, double inertia, double cognitive, double social,
                           const Point2& u1, const Point2& u2, const Point2& lo,
                           const Point2& hi);

// Candidate fitness calls are pure, so they may fan out over threads; all
// random draws happen on the optimizer thread in a fixed order, which keeps
// runs seed-reproducible at any thread count.
TuneResult pso_optimize(const PsoConfig& config, const Objective& objective,
                        bool parallel_fitness = true);

// Real-coded GA: tournament selection of size 2, BLX-0.5 blend crossover,
// Gaussian mutation, elitist survivors.
TuneResult ga_optimize(const GaConfig& config, const Objective& objective,
                       bool parallel_fitness = true);

// The tuning objective from the paper: closed-loop PI run on the converter,
// scored by mean absolute voltage error. Simulation blow-ups return +inf so
// the optimizer simply discards the candidate.
struct TuningScenario {
    ConverterParams params;
    EpisodeSpec spec;

    static TuningScenario standard(double v_ref, const ConverterParams& params,
                                   int horizon_steps = 5000);
};

double pi_closed_loop_mae(const PiGains& gains, const TuningScenario& scenario);
Objective make_pi_objective(const TuningScenario& scenario);

void write_tuner_json(const std::string& path, const std::string& method,
                      const TuneResult& result);

}  // namespace boostctl
