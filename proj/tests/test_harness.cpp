#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "boostctl/harness.hpp"

using namespace boostctl;

namespace {

AnnArtifact tiny_ann() {
    const AnnRanges ranges;
    const AnnDataset ds = generate_dataset(ranges, 2000, 19);
    AnnTrainConfig cfg;
    cfg.hidden = {12};
    cfg.max_iterations = 2500;
    cfg.target_mse = 1e-6;
    cfg.seed = 19;
    return AnnArtifact{train_ann(ds, cfg, ranges).net, ranges};
}

}  // namespace

TEST_CASE("constant-duty closed loop lands on the averaged equilibrium") {
    ConstantDutyController ctl(0.5);
    const Trajectory traj = run_closed_loop(ctl, ConverterParams::desk(),
                                            EpisodeSpec::regulation(48.0, InputProfile::fixed(24.0)));
    CHECK(traj.size() == 5001);
    CHECK(traj.v_out.back() == doctest::Approx(48.0).epsilon(2e-3));
    CHECK(traj.v_out.front() == 0.0);
    CHECK(traj.duty.front() == 0.5);
}

TEST_CASE("closed-loop runs are deterministic") {
    PiController a(kReferencePsoGains), b(kReferencePsoGains);
    const EpisodeSpec spec = EpisodeSpec::regulation(48.0, InputProfile::fixed(24.0));
    const Trajectory t1 = run_closed_loop(a, ConverterParams::desk(), spec);
    const Trajectory t2 = run_closed_loop(b, ConverterParams::desk(), spec);
    CHECK(t1.v_out == t2.v_out);
    CHECK(t1.duty == t2.duty);
    CHECK(t1.reward == t2.reward);
}

TEST_CASE("reference-gain regulation settles inside the band before the horizon") {
    PiController ctl(kReferencePsoGains, "pi-pso");
    const Trajectory traj = run_closed_loop(ctl, ConverterParams::desk(),
                                            EpisodeSpec::regulation(48.0, InputProfile::fixed(24.0)));
    const StepMetrics m = step_metrics(traj, 48.0);
    CHECK(m.settled);
    CHECK(m.settling_time < 1.0);
}

TEST_CASE("evaluation never terminates on the limit mechanism") {
    ConstantDutyController ctl(0.9);  // equilibrium far above v_up
    const Trajectory traj = run_closed_loop(ctl, ConverterParams::desk(),
                                            EpisodeSpec::regulation(48.0, InputProfile::fixed(24.0)));
    CHECK(traj.size() == 5001);  // ran to the horizon regardless
}

TEST_CASE("scenario config json round trip and validation") {
    SUBCASE("defaults with overrides") {
        const ScenarioConfig cfg = ScenarioConfig::from_json_text(
            R"({"params_set":"desk","v_ref":54.0,"profile":{"kind":"step","v_initial":24.0,"v_final":26.0,"step_time":0.5},"seed":3})");
        CHECK(cfg.v_ref == 54.0);
        CHECK(cfg.profile.kind == ProfileKind::Step);
        CHECK(cfg.seed == 3);
        CHECK(cfg.horizon_steps == 5000);
        const EpisodeSpec spec = cfg.episode_spec();
        CHECK(spec.v_up == doctest::Approx(1.2 * 54.0));
        const ScenarioConfig back = ScenarioConfig::from_json_text(cfg.to_json_text());
        CHECK(back.v_ref == cfg.v_ref);
        CHECK(back.profile.step_time == cfg.profile.step_time);
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(ScenarioConfig::from_json_text(R"({"vref":48.0})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(ScenarioConfig::from_json_text(
                            R"({"profile":{"kind":"fixed","v_initial":24.0,"slope":1}})"),
                        std::invalid_argument);
    }
    SUBCASE("bad values are rejected") {
        CHECK_THROWS_AS(ScenarioConfig::from_json_text(R"({"params_set":"bench"})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(ScenarioConfig::from_json_text(R"({"horizon_steps":0})"),
                        std::invalid_argument);
    }
}

TEST_CASE("experiment grid covers every cell and flags missing artifacts") {
    ExperimentArtifacts artifacts;
    artifacts.pi_pso = kReferencePsoGains;
    artifacts.pi_ga = kReferenceGaGains;
    artifacts.ann = tiny_ann();
    // rl intentionally missing

    ExperimentOptions options;
    options.horizon_steps = 2600;
    const Report report = run_experiment(artifacts, options);

    CHECK(report.rows.size() == 24);
    std::set<std::string> cells;
    for (const auto& row : report.rows) {
        cells.insert(row.controller + "/" + row.profile + "/" + std::to_string(row.v_ref));
        if (row.controller == "rl") {
            CHECK_FALSE(row.ok);
            CHECK(row.error == "missing artifact");
        } else {
            CHECK(row.ok);
            CHECK(row.mae_v > 0.0);
        }
    }
    CHECK(cells.size() == 24);

    SUBCASE("report json round trip") {
        const auto path = std::filesystem::temp_directory_path() / "boostctl_report.json";
        write_report_json(path.string(), report);
        const Report back = load_report_json(path.string());
        std::filesystem::remove(path);
        REQUIRE(back.rows.size() == report.rows.size());
        CHECK(back.params_set == report.params_set);
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            CHECK(back.rows[i].controller == report.rows[i].controller);
            CHECK(back.rows[i].mae_v == report.rows[i].mae_v);
            CHECK(back.rows[i].metrics.settling_time == report.rows[i].metrics.settling_time);
        }
    }
    SUBCASE("csv emissions") {
        const auto dir = std::filesystem::temp_directory_path() / "boostctl_csv";
        std::filesystem::create_directories(dir);
        write_metrics_csv((dir / "metrics.csv").string(), report);
        write_reference_comparison_csv((dir / "cmp.csv").string(), report);
        std::ifstream metrics(dir / "metrics.csv");
        std::string header;
        std::getline(metrics, header);
        CHECK(header == "controller,scenario,v_ref,rise_s,settle_s,overshoot_pct,undershoot_pct,mae");
        std::size_t rows = 0;
        std::string line;
        while (std::getline(metrics, line))
            if (!line.empty()) ++rows;
        CHECK(rows == 24);
        metrics.close();
        std::ifstream cmp(dir / "cmp.csv");
        rows = 0;
        while (std::getline(cmp, line))
            if (!line.empty()) ++rows;
        CHECK(rows == 25);  // header plus one line per reference row
        cmp.close();
        std::filesystem::remove_all(dir);
    }
}

TEST_CASE("experiment runs are deterministic end to end") {
    ExperimentArtifacts artifacts;
    artifacts.pi_pso = kReferencePsoGains;
    artifacts.pi_ga = kReferenceGaGains;
    ExperimentOptions options;
    options.horizon_steps = 2600;
    options.v_refs = {48.0};
    const Report a = run_experiment(artifacts, options);
    const Report b = run_experiment(artifacts, options);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].mae_v == b.rows[i].mae_v);
        CHECK(a.rows[i].metrics.settling_time == b.rows[i].metrics.settling_time);
        CHECK(a.rows[i].metrics.overshoot_pct == b.rows[i].metrics.overshoot_pct);
    }
}

TEST_CASE("the bundled reference table maps by controller and profile") {
    const auto table = reference_table();
    CHECK(table.size() == 24);
    int rl_step = 0;
    for (const auto& row : table) {
        if (std::string(row.controller) == "rl" && std::string(row.profile) == "step") ++rl_step;
        CHECK(row.v_ref >= 48.0);
        CHECK(row.v_ref <= 60.0);
    }
    CHECK(rl_step == 3);
}

TEST_CASE("the feedforward controller adapts to the input step within one sample") {
    AnnController ctl(tiny_ann());
    EpisodeSpec spec =
        EpisodeSpec::regulation(48.0, InputProfile::step(24.0, 26.0, 0.5));
    const Trajectory traj = run_closed_loop(ctl, ConverterParams::desk(), spec);

    // The commanded duty drops by about the ideal difference at t = 0.5 s.
    const std::size_t k = static_cast<std::size_t>(std::lround(0.5 / traj.dt)) + 1;
    const double expected_jump = ideal_duty(26.0, 48.0) - ideal_duty(24.0, 48.0);
    CHECK(traj.duty[k] - traj.duty[k - 1] ==
          doctest::Approx(expected_jump).epsilon(0.25));
    // And the loop re-settles into the band afterwards.
    const StepMetrics m = step_metrics(traj, 48.0);
    CHECK(m.settled);
}

TEST_CASE("the ppo controller acts on the normalized observation mean") {
    PpoConfig cfg;
    cfg.hidden_layers = 1;
    cfg.neurons = 8;
    cfg.seed = 4;
    const GaussianPolicy policy = make_policy(cfg);
    PpoController ctl(policy);
    ControlInputs in;
    in.v_ref = 48.0;
    in.v_out = 24.0;
    in.error = 24.0;
    in.error_rate = 0.0;
    const auto nobs = normalize_observation(Observation{24.0, 24.0, 0.0}, 48.0, in.dt);
    CHECK(ctl.act(in) == policy.mean_action(nobs));
}
