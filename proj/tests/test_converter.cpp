#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "boostctl/acceptance.hpp"
#include "boostctl/converter.hpp"

using namespace boostctl;

TEST_CASE("parameter sets and validation") {
    CHECK(ConverterParams::paper().capacitance == doctest::Approx(400e-3));
    CHECK(ConverterParams::desk().capacitance == doctest::Approx(400e-6));
    CHECK(ConverterParams::named("desk").capacitance == ConverterParams::desk().capacitance);
    CHECK_THROWS_AS(ConverterParams::named("bench"), std::invalid_argument);

    ConverterParams bad = ConverterParams::desk();
    bad.duty_min = 0.9;
    bad.duty_max = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = ConverterParams::desk();
    bad.inductance = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("averaged derivative hand evaluations") {
    ConverterParams p = ConverterParams::paper();  // L=1e-5, C=0.4, R=50

    SUBCASE("discharged plant at half duty") {
        const StateDeriv d = averaged_derivative(p, {0.0, 0.0}, 0.5, 24.0);
        CHECK(d.di_l == doctest::Approx(2.4e6).epsilon(1e-12));
        CHECK(d.dv_c == 0.0);
    }
    SUBCASE("closed-mode limit at the duty ceiling") {
        const StateDeriv d = averaged_derivative(p, {0.0, 0.0}, 0.95, 24.0);
        CHECK(d.di_l == doctest::Approx(24.0 / p.inductance).epsilon(1e-12));
    }
    SUBCASE("equilibrium point has zero derivatives") {
        // Solve (1-d) v_c = v_in and (1-d) i_l = v_c / R at d = 0.5.
        const StateDeriv d = averaged_derivative(p, {1.92, 48.0}, 0.5, 24.0);
        CHECK(d.di_l == 0.0);
        CHECK(d.dv_c == 0.0);
    }
    SUBCASE("duty outside [0,1) is rejected") {
        CHECK_THROWS_AS(averaged_derivative(p, {0, 0}, 1.0, 24.0), std::invalid_argument);
        CHECK_THROWS_AS(averaged_derivative(p, {0, 0}, -0.1, 24.0), std::invalid_argument);
    }
}

TEST_CASE("integrate_step holds exact equilibria") {
    const ConverterParams p = ConverterParams::desk();
    const ConverterState eq{1.92, 48.0};
    const ConverterState next = integrate_step(p, eq, 0.5, 24.0, p.dt);
    CHECK(next.i_l == eq.i_l);
    CHECK(next.v_c == eq.v_c);
}

TEST_CASE("one step matches the fine Euler oracle on the slow plant") {
    const ConverterParams p = ConverterParams::paper();
    const ConverterState got = integrate_step(p, {0.0, 0.0}, 0.5, 24.0, p.dt);
    const ConverterState ref =
        acceptance::euler_reference(p, {0.0, 0.0}, 0.5, 24.0, p.dt / 1000.0, 1000);
    const double rel =
        std::hypot(got.i_l - ref.i_l, got.v_c - ref.v_c) / std::hypot(ref.i_l, ref.v_c);
    CHECK(rel <= 2e-6);  // the oracle itself carries ~1e-6 first-order error
}

TEST_CASE("long constant-duty run converges to the averaged equilibrium") {
    const ConverterParams p = ConverterParams::desk();
    ConverterState s{0.0, 0.0};
    for (int k = 0; k < 5000; ++k) s = integrate_step(p, s, 0.5, 24.0, p.dt);
    CHECK(s.v_c == doctest::Approx(48.0).epsilon(1e-3));
    CHECK((1.0 - 0.5) * s.i_l == doctest::Approx(s.v_c / p.load_resistance).epsilon(1e-3));
}

TEST_CASE("halving dt sharpens the terminal state roughly sixteenfold") {
    const ConverterParams p = ConverterParams::desk();
    const ConverterState start{1.5, 47.7};
    const auto err = [&](double dt) {
        const long n = std::lround(8e-4 / dt);
        ConverterState s = start;
        for (long k = 0; k < n; ++k) s = integrate_step(p, s, 0.5, 24.0, dt);
        const ConverterState ref =
            acceptance::euler_reference(p, start, 0.5, 24.0, dt / 1000.0, n * 1000);
        return std::hypot(s.i_l - ref.i_l, s.v_c - ref.v_c);
    };
    CHECK(err(8e-5) / err(4e-5) >= 12.0);
}

TEST_CASE("inductor current clamps at zero") {
    const ConverterParams p = ConverterParams::desk();
    // High capacitor voltage drives i_l negative within a short step.
    const ConverterState next = integrate_step(p, {0.001, 55.0}, 0.5, 24.0, 1e-5);
    CHECK(next.i_l == 0.0);
    CHECK(next.v_c > 0.0);
}

TEST_CASE("integrate_step rejects non-positive dt") {
    const ConverterParams p = ConverterParams::desk();
    CHECK_THROWS_AS(integrate_step(p, {0, 0}, 0.5, 24.0, 0.0), std::invalid_argument);
}

TEST_CASE("input profiles") {
    SUBCASE("fixed profile is constant") {
        const InputProfile f = InputProfile::fixed(24.0);
        CHECK(input_profile_at(f, 0.7) == 24.0);
    }
    SUBCASE("step switches exactly at the step time") {
        const InputProfile s = InputProfile::step(24.0, 26.0, 0.5);
        CHECK(input_profile_at(s, 0.49) == 24.0);
        CHECK(input_profile_at(s, 0.5) == 26.0);
        CHECK(input_profile_at(s, 0.9) == 26.0);
    }
    SUBCASE("degenerate step is constant") {
        const InputProfile s = InputProfile::step(24.0, 24.0, 0.5);
        CHECK(input_profile_at(s, 0.2) == input_profile_at(s, 0.8));
    }
    SUBCASE("negative time and voltages are rejected") {
        const InputProfile f = InputProfile::fixed(24.0);
        CHECK_THROWS_AS(input_profile_at(f, -1.0), std::invalid_argument);
        CHECK_THROWS_AS(InputProfile::fixed(-5.0), std::invalid_argument);
    }
}
