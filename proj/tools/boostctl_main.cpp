// Command-line front end: simulation, tuning, training, the comparison grid
// and the verification battery.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "boostctl/acceptance.hpp"
#include "boostctl/harness.hpp"
#include "json.hpp"

using namespace boostctl;
namespace fs = std::filesystem;

namespace {

std::optional<Point2> gains_from_file(const std::string& path) {
    if (path.empty()) return std::nullopt;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open gains file: " + path);
    nlohmann::json j;
    in >> j;
    return Point2{j.at("k_p").get<double>(), j.at("k_i").get<double>()};
}

void print_metrics(const std::string& label, const StepMetrics& m, double mae_v) {
    std::printf("%s: rise %.6g s, settle %.6g s%s, overshoot %.4g%%, undershoot %.4g%%, "
                "ss error %.4g V, mae %.4g V\n",
                label.c_str(), m.rise_time, m.settling_time, m.settled ? "" : " (never holds)",
                m.overshoot_pct, m.undershoot_pct, m.steady_state_error, mae_v);
}

int cmd_simulate(const std::string& out_dir, const ScenarioConfig& scenario,
                 const std::string& controller_kind, double duty, const PiGains& gains,
                 const std::string& ann_file, const std::string& ppo_prefix) {
    std::unique_ptr<Controller> controller;
    if (controller_kind == "const") {
        controller = std::make_unique<ConstantDutyController>(duty);
    } else if (controller_kind == "pi") {
        controller = std::make_unique<PiController>(gains);
    } else if (controller_kind == "ann") {
        if (ann_file.empty()) throw std::runtime_error("simulate: --ann-file required");
        controller = std::make_unique<AnnController>(load_ann(ann_file));
    } else if (controller_kind == "ppo") {
        if (ppo_prefix.empty()) throw std::runtime_error("simulate: --ppo-prefix required");
        controller = std::make_unique<PpoController>(load_ppo(ppo_prefix).policy);
    } else {
        throw std::runtime_error("simulate: unknown controller " + controller_kind);
    }

    const Trajectory traj =
        run_closed_loop(*controller, scenario.converter_params(), scenario.episode_spec());
    fs::create_directories(out_dir);
    const std::string path = out_dir + "/trajectory.csv";
    write_trajectory_csv(path, traj);
    print_metrics(controller->name() + " " + scenario.id(), step_metrics(traj, scenario.v_ref),
                  mae(traj, scenario.v_ref));
    std::printf("trajectory written to %s\n", path.c_str());
    return 0;
}

int cmd_verify(const std::string& report_file, const std::string& ann_file,
               const std::string& ppo_prefix, const std::string& pso_file,
               const std::string& ga_file, std::uint64_t seed) {
    std::optional<Report> report;
    if (!report_file.empty()) report = load_report_json(report_file);
    std::optional<AnnArtifact> ann;
    if (!ann_file.empty()) ann = load_ann(ann_file);
    std::optional<PpoCheckpoint> ppo;
    if (!ppo_prefix.empty()) ppo = load_ppo(ppo_prefix);

    std::vector<acceptance::CriterionResult> results;
    results.push_back(acceptance::gradient_oracle());
    results.push_back(acceptance::plant_equilibrium());
    results.push_back(acceptance::integrator_order());
    results.push_back(acceptance::metrics_oracle());
    results.push_back(acceptance::gae_oracle());
    results.push_back(acceptance::ppo_algebra());
    results.push_back(acceptance::tuner_soundness(gains_from_file(pso_file),
                                                  gains_from_file(ga_file),
                                                  /*run_if_missing=*/false, seed));
    results.push_back(acceptance::pi_regulation());
    results.push_back(acceptance::ann_accuracy(ann));
    results.push_back(acceptance::ppo_outcome(ppo));
    results.push_back(acceptance::comparison_orderings(report));

    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("%s\n", acceptance::format_criterion(r).c_str());
        if (!r.passed()) all_pass = false;
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boost converter control workbench"};
    app.require_subcommand(1);

    std::string out_dir = "out";
    std::string params_set = "desk";
    std::uint64_t seed = 0;

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run one closed loop and dump the trajectory");
    std::string sim_profile = "fixed";
    std::string sim_controller = "const";
    std::string sim_config, sim_ann, sim_ppo, sim_gains_file;
    double sim_vref = 48.0, sim_duty = 0.5;
    int sim_horizon = 5000;
    PiGains sim_gains = kReferencePsoGains;
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--params", params_set, "parameter set: paper|desk");
    simulate->add_option("--seed", seed, "random seed");
    simulate->add_option("--config", sim_config, "scenario config JSON (overrides flags)");
    simulate->add_option("--vref", sim_vref, "reference voltage");
    simulate->add_option("--profile", sim_profile, "input profile: fixed|step");
    simulate->add_option("--horizon", sim_horizon, "horizon in control steps");
    simulate->add_option("--controller", sim_controller, "const|pi|ann|ppo");
    simulate->add_option("--duty", sim_duty, "constant duty command");
    simulate->add_option("--kp", sim_gains.kp, "PI proportional gain");
    simulate->add_option("--ki", sim_gains.ki, "PI integral gain");
    simulate->add_option("--gains-file", sim_gains_file, "tuner output JSON with k_p/k_i");
    simulate->add_option("--ann-file", sim_ann, "duty-network checkpoint");
    simulate->add_option("--ppo-prefix", sim_ppo, "policy checkpoint prefix");

    // tune-pi
    auto* tune = app.add_subcommand("tune-pi", "optimize PI gains by closed-loop mae");
    std::string tune_method = "pso";
    double tune_vref = 48.0;
    PsoConfig pso_cfg;
    GaConfig ga_cfg;
    tune->add_option("--out", out_dir, "output directory");
    tune->add_option("--params", params_set, "parameter set: paper|desk");
    tune->add_option("--seed", seed, "random seed");
    tune->add_option("--method", tune_method, "pso|ga");
    tune->add_option("--vref", tune_vref, "reference voltage");
    tune->add_option("--swarm", pso_cfg.swarm_size, "pso swarm size");
    tune->add_option("--iterations", pso_cfg.iterations, "pso iterations");
    tune->add_option("--population", ga_cfg.population_size, "ga population");
    tune->add_option("--generations", ga_cfg.generations, "ga generations");

    // train-ann
    auto* tann = app.add_subcommand("train-ann", "fit the feedforward duty network");
    std::size_t ann_samples = 100000;
    bool ann_emit_dataset = false;
    AnnTrainConfig ann_cfg;
    tann->add_option("--out", out_dir, "output directory");
    tann->add_option("--seed", seed, "random seed");
    tann->add_option("--n", ann_samples, "dataset size");
    tann->add_option("--max-iterations", ann_cfg.max_iterations, "minibatch update budget");
    tann->add_option("--target-mse", ann_cfg.target_mse, "training stop threshold");
    tann->add_flag("--emit-dataset", ann_emit_dataset, "also write dataset.csv");

    // train-ppo
    auto* tppo = app.add_subcommand("train-ppo", "train the policy on the converter environment");
    double ppo_vref = 48.0;
    PpoConfig ppo_cfg;
    bool ppo_fallback = false;
    tppo->add_option("--out", out_dir, "output directory");
    tppo->add_option("--params", params_set, "parameter set: paper|desk");
    tppo->add_option("--seed", ppo_cfg.seed, "random seed");
    tppo->add_option("--vref", ppo_vref, "reference voltage");
    tppo->add_option("--episodes", ppo_cfg.episodes, "training episodes");
    tppo->add_option("--lr-actor", ppo_cfg.lr_actor, "actor learning rate");
    tppo->add_option("--lr-critic", ppo_cfg.lr_critic, "critic learning rate");
    tppo->add_flag("--with-fallback", ppo_fallback,
                   "retry at 3e-3 if the default rate fails the band check");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "run the comparison grid and emit the report");
    std::string ev_pso_file, ev_ga_file, ev_ann, ev_ppo;
    std::vector<double> ev_vrefs{48.0, 54.0, 60.0};
    bool ev_traj = false;
    evaluate->add_option("--out", out_dir, "output directory");
    evaluate->add_option("--params", params_set, "parameter set: paper|desk");
    evaluate->add_option("--seed", seed, "random seed");
    evaluate->add_option("--pso-file", ev_pso_file, "tuned PSO gains JSON (default: bundled)");
    evaluate->add_option("--ga-file", ev_ga_file, "tuned GA gains JSON (default: bundled)");
    evaluate->add_option("--ann-file", ev_ann, "duty-network checkpoint");
    evaluate->add_option("--ppo-prefix", ev_ppo, "policy checkpoint prefix");
    evaluate->add_option("--vrefs", ev_vrefs, "reference voltages");
    evaluate->add_flag("--trajectories", ev_traj, "dump every cell trajectory");

    // report
    auto* report_cmd = app.add_subcommand("report", "write the side-by-side reference sheet");
    std::string report_file;
    report_cmd->add_option("--out", out_dir, "output directory");
    report_cmd->add_option("--report", report_file, "report JSON from evaluate")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "run the acceptance battery and print verdicts");
    std::string vr_report, vr_ann, vr_ppo, vr_pso, vr_ga;
    verify->add_option("--report", vr_report, "report JSON from evaluate");
    verify->add_option("--ann-file", vr_ann, "duty-network checkpoint");
    verify->add_option("--ppo-prefix", vr_ppo, "policy checkpoint prefix");
    verify->add_option("--pso-file", vr_pso, "tuned PSO gains JSON");
    verify->add_option("--ga-file", vr_ga, "tuned GA gains JSON");
    verify->add_option("--seed", seed, "random seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            ScenarioConfig scenario;
            if (!sim_config.empty()) {
                scenario = ScenarioConfig::from_json_file(sim_config);
            } else {
                scenario.params_set = params_set;
                scenario.v_ref = sim_vref;
                scenario.horizon_steps = sim_horizon;
                scenario.seed = seed;
                const double v_in = scenario.converter_params().v_in_nominal;
                scenario.profile = sim_profile == "step"
                                       ? InputProfile::step(v_in, 26.0, 0.5)
                                       : InputProfile::fixed(v_in);
            }
            if (!sim_gains_file.empty()) {
                const auto g = gains_from_file(sim_gains_file);
                sim_gains = PiGains{(*g)[0], (*g)[1]};
            }
            return cmd_simulate(out_dir, scenario, sim_controller, sim_duty, sim_gains, sim_ann,
                                sim_ppo);
        }

        if (tune->parsed()) {
            fs::create_directories(out_dir);
            const TuningScenario scenario =
                TuningScenario::standard(tune_vref, ConverterParams::named(params_set));
            TuneResult result;
            if (tune_method == "pso") {
                pso_cfg.seed = seed;
                result = pso_optimize(pso_cfg, make_pi_objective(scenario));
            } else if (tune_method == "ga") {
                ga_cfg.seed = seed;
                result = ga_optimize(ga_cfg, make_pi_objective(scenario));
            } else {
                throw std::runtime_error("tune-pi: method must be pso or ga");
            }
            const std::string path = out_dir + "/tune_" + tune_method + ".json";
            write_tuner_json(path, tune_method, result);
            std::printf("%s best: k_p=%.6g k_i=%.6g mae=%.6g V -> %s\n", tune_method.c_str(),
                        result.best.position[0], result.best.position[1], result.best.fitness,
                        path.c_str());
            return 0;
        }

        if (tann->parsed()) {
            fs::create_directories(out_dir);
            const AnnRanges ranges;
            ann_cfg.seed = seed;
            const AnnDataset dataset = generate_dataset(ranges, ann_samples, seed);
            if (ann_emit_dataset) write_dataset_csv(out_dir + "/dataset.csv", dataset);
            const AnnTrainResult trained = train_ann(dataset, ann_cfg, ranges);
            save_ann(out_dir + "/ann.json", AnnArtifact{trained.net, ranges});
            std::printf("trained on %zu samples (%d updates): train mse %.3e, test mse %.3e -> "
                        "%s/ann.json\n",
                        dataset.train_count, trained.iterations, trained.train_mse,
                        trained.test_mse, out_dir.c_str());
            return 0;
        }

        if (tppo->parsed()) {
            fs::create_directories(out_dir);
            const ConverterParams params = ConverterParams::named(params_set);
            TrainResult result;
            PpoConfig used = ppo_cfg;
            if (ppo_fallback) {
                auto outcome = acceptance::train_ppo_with_fallback(ppo_vref, params,
                                                                   ppo_cfg.seed,
                                                                   ppo_cfg.episodes);
                std::printf("%s\n", outcome.note.c_str());
                result = std::move(outcome.result);
                used = outcome.config;
            } else {
                const auto factory = [&]() {
                    return BoostEnv(params,
                                    EpisodeSpec::regulation(
                                        ppo_vref, InputProfile::fixed(params.v_in_nominal)),
                                    true);
                };
                result = train(factory, ppo_cfg);
            }
            save_ppo(out_dir + "/ppo_", result, used);
            double last = result.reward_curve.empty() ? 0.0 : result.reward_curve.back();
            std::printf("trained %zu episodes, final episode reward %.2f -> %s/ppo_*.json\n",
                        result.reward_curve.size(), last, out_dir.c_str());
            return 0;
        }

        if (evaluate->parsed()) {
            fs::create_directories(out_dir);
            ExperimentArtifacts artifacts;
            artifacts.pi_pso = kReferencePsoGains;
            artifacts.pi_ga = kReferenceGaGains;
            if (const auto g = gains_from_file(ev_pso_file)) artifacts.pi_pso = PiGains{(*g)[0], (*g)[1]};
            if (const auto g = gains_from_file(ev_ga_file)) artifacts.pi_ga = PiGains{(*g)[0], (*g)[1]};
            if (!ev_ann.empty()) artifacts.ann = load_ann(ev_ann);
            if (!ev_ppo.empty()) artifacts.rl = load_ppo(ev_ppo).policy;

            ExperimentOptions options;
            options.params_set = params_set;
            options.v_refs = ev_vrefs;
            options.seed = seed;
            if (ev_traj) {
                options.trajectory_dir = out_dir + "/trajectories";
                fs::create_directories(options.trajectory_dir);
            }
            const Report report = run_experiment(artifacts, options);
            write_report_json(out_dir + "/report.json", report);
            write_metrics_csv(out_dir + "/metrics.csv", report);
            write_reference_comparison_csv(out_dir + "/reference_comparison.csv", report);
            for (const auto& row : report.rows) {
                if (row.ok)
                    print_metrics(row.controller + " " + row.scenario, row.metrics, row.mae_v);
                else
                    std::printf("%s %s: failed (%s)\n", row.controller.c_str(),
                                row.scenario.c_str(), row.error.c_str());
            }
            std::printf("report written to %s/report.json\n", out_dir.c_str());
            return 0;
        }

        if (report_cmd->parsed()) {
            fs::create_directories(out_dir);
            const Report report = load_report_json(report_file);
            const std::string path = out_dir + "/reference_comparison.csv";
            write_reference_comparison_csv(path, report);
            std::printf("side-by-side sheet written to %s\n", path.c_str());
            return 0;
        }

        if (verify->parsed())
            return cmd_verify(vr_report, vr_ann, vr_ppo, vr_pso, vr_ga, seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
