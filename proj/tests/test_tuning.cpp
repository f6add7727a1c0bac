#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "boostctl/harness.hpp"
#include "boostctl/tuning.hpp"

using namespace boostctl;

namespace {

const Objective bowl = [](const Point2& p) {
    const double dx = p[0] - 0.002, dy = p[1] - 0.315;
    return dx * dx + dy * dy;
};

bool monotone_non_increasing(const std::vector<double>& h) {
    for (std::size_t i = 1; i < h.size(); ++i)
        if (h[i] > h[i - 1]) return false;
    return true;
}

}  // namespace

TEST_CASE("velocity update hand cases") {
    const Point2 lo{0.0, 0.0}, hi{0.05, 2.0};
    SUBCASE("pure inertia keeps the velocity") {
        const Point2 v =
            pso_velocity_update({0.004, 0.05}, {0.01, 0.5}, {0.02, 0.6}, {0.03, 0.7}, 1.0, 0.0,
                                0.0, {0.3, 0.9}, {0.1, 0.2}, lo, hi);
        CHECK(v[0] == 0.004);
        CHECK(v[1] == 0.05);
    }
    SUBCASE("cognitive pull alone reproduces the difference") {
        const Point2 v = pso_velocity_update({0.0, 0.0}, {0.01, 0.2}, {0.011, 0.3}, {0.0, 0.0},
                                             0.0, 1.0, 0.0, {1.0, 1.0}, {0.5, 0.5}, lo, hi);
        CHECK(v[0] == doctest::Approx(0.001).epsilon(1e-12));
        CHECK(v[1] == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("stagnation at a shared optimum") {
        const Point2 x{0.02, 0.5};
        const Point2 v =
            pso_velocity_update({0.0, 0.0}, x, x, x, 0.0, 1.5, 1.5, {1.0, 1.0}, {1.0, 1.0}, lo,
                                hi);
        CHECK(v[0] == 0.0);
        CHECK(v[1] == 0.0);
    }
    SUBCASE("velocity clamps at a fifth of the range") {
        const Point2 v = pso_velocity_update({0.0, 0.0}, {0.0, 0.0}, {0.05, 2.0}, {0.05, 2.0},
                                             0.0, 2.0, 2.0, {1.0, 1.0}, {1.0, 1.0}, lo, hi);
        CHECK(v[0] == doctest::Approx(0.01));  // 0.2 * 0.05
        CHECK(v[1] == doctest::Approx(0.4));   // 0.2 * 2.0
    }
}

TEST_CASE("pso converges on the synthetic bowl") {
    PsoConfig cfg;
    cfg.seed = 42;
    const TuneResult r = pso_optimize(cfg, bowl);
    CHECK(r.best.fitness < 1e-8);
    CHECK(monotone_non_increasing(r.history));
}

TEST_CASE("a frozen single-particle swarm never moves") {
    PsoConfig cfg;
    cfg.swarm_size = 1;
    cfg.iterations = 10;
    cfg.inertia = 0.0;
    cfg.cognitive = 0.0;
    cfg.social = 0.0;
    cfg.seed = 5;
    const TuneResult r = pso_optimize(cfg, bowl);
    for (double h : r.history) CHECK(h == r.history.front());
}

TEST_CASE("pso honours the box at every evaluation") {
    PsoConfig cfg;
    cfg.seed = 11;
    cfg.iterations = 20;
    bool inside = true;
    const Objective checked = [&](const Point2& p) {
        if (p[0] < cfg.lo[0] || p[0] > cfg.hi[0] || p[1] < cfg.lo[1] || p[1] > cfg.hi[1])
            inside = false;
        return bowl(p);
    };
    (void)pso_optimize(cfg, checked, /*parallel_fitness=*/false);
    CHECK(inside);
}

TEST_CASE("seeded pso runs are identical") {
    PsoConfig cfg;
    cfg.seed = 900;
    const TuneResult a = pso_optimize(cfg, bowl);
    const TuneResult b = pso_optimize(cfg, bowl);
    CHECK(a.history == b.history);
    CHECK(a.best.position == b.best.position);
}

TEST_CASE("parallel and serial fitness evaluation give the same tuning run") {
    PsoConfig cfg;
    cfg.seed = 31;
    cfg.iterations = 15;
    const TuneResult a = pso_optimize(cfg, bowl, true);
    const TuneResult b = pso_optimize(cfg, bowl, false);
    CHECK(a.history == b.history);
}

TEST_CASE("ga converges on the synthetic bowl") {
    GaConfig cfg;
    cfg.seed = 42;
    const TuneResult r = ga_optimize(cfg, bowl);
    CHECK(r.best.fitness < 1e-6);
    CHECK(monotone_non_increasing(r.history));
}

TEST_CASE("ga with all operators disabled keeps the population frozen") {
    GaConfig cfg;
    cfg.population_size = 12;
    cfg.generations = 8;
    cfg.crossover_rate = 0.0;
    cfg.mutation_rate = 0.0;
    cfg.elitism_count = 12;
    cfg.seed = 2;
    const TuneResult r = ga_optimize(cfg, bowl);
    for (double h : r.history) CHECK(h == r.history.front());
}

TEST_CASE("ga honours the box and reproduces by seed") {
    GaConfig cfg;
    cfg.seed = 77;
    cfg.generations = 15;
    bool inside = true;
    const Objective checked = [&](const Point2& p) {
        if (p[0] < cfg.lo[0] || p[0] > cfg.hi[0] || p[1] < cfg.lo[1] || p[1] > cfg.hi[1])
            inside = false;
        return bowl(p);
    };
    const TuneResult a = ga_optimize(cfg, checked, false);
    CHECK(inside);
    const TuneResult b = ga_optimize(cfg, bowl, true);
    const TuneResult c = ga_optimize(cfg, bowl, true);
    CHECK(b.history == c.history);
    (void)a;
}

TEST_CASE("configs are validated") {
    PsoConfig p;
    p.swarm_size = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    GaConfig g;
    g.elitism_count = g.population_size + 1;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = GaConfig{};
    g.mutation_rate = 1.5;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}

TEST_CASE("closed-loop fitness is pure and ranks gains sensibly") {
    const TuningScenario scenario = TuningScenario::standard(48.0, ConverterParams::desk());
    const double dead = pi_closed_loop_mae(PiGains{0.0, 0.0}, scenario);
    const double reference = pi_closed_loop_mae(kReferencePsoGains, scenario);
    CHECK(dead > 5.0);  // duty pinned at the floor leaves tens of volts of error
    CHECK(reference < dead);
    CHECK(pi_closed_loop_mae(PiGains{0.0, 0.0}, scenario) == dead);
}

TEST_CASE("a numerically exploding candidate scores infinitely bad") {
    TuningScenario scenario = TuningScenario::standard(48.0, ConverterParams::desk());
    scenario.params.dt = 0.5;  // grossly unstable integration
    scenario.spec.horizon_steps = 50;
    const double fit = pi_closed_loop_mae(PiGains{0.05, 2.0}, scenario);
    CHECK(std::isinf(fit));
}
