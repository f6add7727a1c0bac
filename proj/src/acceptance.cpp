#include "boostctl/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "boostctl/metrics.hpp"
#include "boostctl/pi.hpp"
#include "boostctl/rng.hpp"

namespace boostctl::acceptance {

namespace {

using Status = CriterionResult::Status;

CriterionResult make(int id, std::string name, bool pass, std::string detail) {
    return CriterionResult{id, std::move(name), pass ? Status::Pass : Status::Fail,
                           std::move(detail)};
}

CriterionResult skip(int id, std::string name, std::string detail) {
    return CriterionResult{id, std::move(name), Status::Skip, std::move(detail)};
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return std::string(buf);
}

bool grads_close(const MlpGrads& a, const MlpGrads& b, double rel_tol, double abs_floor,
                 double& worst) {
    bool ok = true;
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        for (std::size_t i = 0; i < a.weights[l].size(); ++i) {
            const double x = a.weights[l][i], y = b.weights[l][i];
            const double err = std::abs(x - y);
            const double rel = err / std::max({std::abs(x), std::abs(y), abs_floor});
            worst = std::max(worst, rel);
            if (err > abs_floor && rel > rel_tol) ok = false;
        }
        for (std::size_t i = 0; i < a.biases[l].size(); ++i) {
            const double x = a.biases[l][i], y = b.biases[l][i];
            const double err = std::abs(x - y);
            const double rel = err / std::max({std::abs(x), std::abs(y), abs_floor});
            worst = std::max(worst, rel);
            if (err > abs_floor && rel > rel_tol) ok = false;
        }
    }
    return ok;
}

}  // namespace

std::string format_criterion(const CriterionResult& r) {
    const char* status = r.status == Status::Pass ? "PASS"
                         : r.status == Status::Fail ? "FAIL"
                                                    : "SKIP";
    return fmt("CRITERION %02d %s %s: %s", r.id, status, r.name.c_str(), r.detail.c_str());
}

ConverterState euler_reference(const ConverterParams& params, ConverterState state, double duty,
                               double v_in, double dt_fine, long steps) {
    for (long k = 0; k < steps; ++k) {
        const StateDeriv d = averaged_derivative(params, state, duty, v_in);
        state.i_l = std::max(0.0, state.i_l + dt_fine * d.di_l);
        state.v_c += dt_fine * d.dv_c;
    }
    return state;
}

CriterionResult gradient_oracle() {
    struct Case {
        std::vector<int> sizes;
        Activation hidden;
        Activation output;
        std::uint64_t seed;
    };
    std::vector<Case> cases = {
        {{3, 32, 32, 32, 1}, Activation::Tanh, Activation::Identity, 101},
    };
    const std::vector<std::vector<int>> shapes = {
        {2, 8, 1}, {3, 16, 1}, {4, 8, 8, 2}, {3, 16, 8, 1}, {5, 12, 3}, {2, 4, 4, 1},
        {6, 10, 10, 1}, {3, 24, 2}, {1, 8, 8, 1}, {4, 6, 6, 6, 1},
    };
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        cases.push_back({shapes[i], Activation::Tanh,
                         i % 2 == 0 ? Activation::Identity : Activation::Tanh, 200 + i});
        cases.push_back({shapes[i], i % 3 == 0 ? Activation::Relu : Activation::Tanh,
                         Activation::Identity, 300 + i});
    }

    double worst = 0.0;
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const Case& tc = cases[c];
        const Mlp net = Mlp::init(tc.sizes, tc.hidden, tc.output, tc.seed);
        Rng rng(tc.seed ^ 0xabcdef);
        std::vector<double> input(tc.sizes.front());
        for (double& x : input) x = rng.uniform(-1.0, 1.0);
        std::vector<double> target(tc.sizes.back());
        for (double& t : target) t = rng.uniform(-1.0, 1.0);

        Mlp::Cache cache;
        const std::vector<double> out = net.forward(input, &cache);
        std::vector<double> out_grad(out.size());
        for (std::size_t k = 0; k < out.size(); ++k) out_grad[k] = out[k] - target[k];
        const MlpGrads analytic = net.backward(cache, out_grad);

        const auto loss = [&](std::span<const double> y) {
            double s = 0.0;
            for (std::size_t k = 0; k < y.size(); ++k)
                s += 0.5 * (y[k] - target[k]) * (y[k] - target[k]);
            return s;
        };
        const MlpGrads fd = finite_diff_grad(net, input, loss, 1e-5);
        if (!grads_close(analytic, fd, 1e-4, 1e-8, worst))
            return make(1, "gradient-oracle", false,
                        fmt("case %zu disagrees, worst rel err %.3e (tol 1e-4)", c, worst));
    }
    return make(1, "gradient-oracle", true,
                fmt("%zu nets, worst rel err %.3e (tol 1e-4)", cases.size(), worst));
}

CriterionResult plant_equilibrium() {
    const ConverterParams params = ConverterParams::desk();
    double worst_v = 0.0, worst_p = 0.0;
    for (double duty : {0.3, 0.5, 0.6}) {
        ConverterState s{0.0, 0.0};
        for (int k = 0; k < 5000; ++k)
            s = integrate_step(params, s, duty, params.v_in_nominal, params.dt);
        const double v_eq = params.v_in_nominal / (1.0 - duty);
        const double v_err = std::abs(s.v_c - v_eq) / v_eq;
        const double p_in = params.v_in_nominal * s.i_l;
        const double p_out = s.v_c * s.v_c / params.load_resistance;
        const double p_err = std::abs(p_in - p_out) / p_out;
        worst_v = std::max(worst_v, v_err);
        worst_p = std::max(worst_p, p_err);
        if (v_err >= 1e-3 || p_err >= 5e-3)
            return make(2, "plant-equilibrium", false,
                        fmt("duty %.2f: voltage err %.3e (tol 1e-3), power err %.3e (tol 5e-3)",
                            duty, v_err, p_err));
    }
    return make(2, "plant-equilibrium", true,
                fmt("duty {0.3,0.5,0.6}: worst voltage err %.2e, worst power err %.2e", worst_v,
                    worst_p));
}

CriterionResult integrator_order() {
    const ConverterParams params = ConverterParams::desk();
    const ConverterState start{1.5, 47.7};
    const double duty = 0.5, v_in = 24.0, horizon = 8e-4;

    const auto terminal_error = [&](double dt) {
        const long n = std::lround(horizon / dt);
        ConverterState s = start;
        for (long k = 0; k < n; ++k) s = integrate_step(params, s, duty, v_in, dt);
        const ConverterState ref =
            euler_reference(params, start, duty, v_in, dt / 1000.0, n * 1000);
        return std::hypot(s.i_l - ref.i_l, s.v_c - ref.v_c);
    };

    const double err_coarse = terminal_error(8e-5);
    const double err_half = terminal_error(4e-5);
    const double ratio = err_coarse / err_half;
    return make(3, "integrator-order", ratio >= 12.0,
                fmt("err(8e-5)=%.3e err(4e-5)=%.3e ratio %.1f (>= 12 required)", err_coarse,
                    err_half, ratio));
}

CriterionResult metrics_oracle() {
    const double v_ref = 48.0, dt = 2e-4;
    double worst_rise = 0.0, worst_settle = 0.0;
    for (double tau : {0.01, 0.05, 0.2}) {
        Trajectory traj;
        traj.dt = dt;
        const std::size_t n = 5001;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * dt;
            const double v = v_ref * (1.0 - std::exp(-t / tau));
            traj.v_in.push_back(24.0);
            traj.duty.push_back(0.5);
            traj.i_l.push_back(0.0);
            traj.v_out.push_back(v);
            traj.error.push_back(v_ref - v);
            traj.reward.push_back(0.0);
        }
        const StepMetrics m = step_metrics(traj, v_ref);
        const double rise_expect = tau * std::log(9.0);
        const double settle_expect = tau * std::log(50.0);
        const double rise_err = std::abs(m.rise_time - rise_expect);
        const double settle_err = std::abs(m.settling_time - settle_expect);
        worst_rise = std::max(worst_rise, rise_err);
        worst_settle = std::max(worst_settle, settle_err);
        if (rise_err > dt || settle_err > dt || m.overshoot_pct != 0.0 || !m.settled)
            return make(4, "metrics-oracle", false,
                        fmt("tau %.2f: rise err %.2e settle err %.2e overshoot %.3g", tau,
                            rise_err, settle_err, m.overshoot_pct));
    }
    return make(4, "metrics-oracle", true,
                fmt("tau {0.01,0.05,0.2}: worst rise err %.2e, settle err %.2e (tol %.0e)",
                    worst_rise, worst_settle, dt));
}

CriterionResult gae_oracle() {
    Rng rng(777);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 10;
        std::vector<double> rewards(n), values(n);
        for (double& r : rewards) r = rng.uniform(-1.0, 1.0);
        for (double& v : values) v = rng.uniform(-1.0, 1.0);
        const double bootstrap = rng.uniform(-1.0, 1.0);
        const double gamma = rng.uniform(0.9, 1.0);

        const auto [adv, ret] = compute_gae(rewards, values, bootstrap, gamma, 1.0);
        for (std::size_t t = 0; t < n; ++t) {
            double g = 0.0, scale = 1.0;
            for (std::size_t k = t; k < n; ++k) {
                g += scale * rewards[k];
                scale *= gamma;
            }
            g += scale * bootstrap;
            worst = std::max(worst, std::abs(adv[t] - (g - values[t])));
            worst = std::max(worst, std::abs(ret[t] - g));
        }
    }
    return make(5, "gae-oracle", worst <= 1e-12,
                fmt("100 sequences, worst |diff| %.2e (tol 1e-12)", worst));
}

CriterionResult ppo_algebra() {
    PpoConfig config;
    config.neurons = 16;
    config.hidden_layers = 2;
    config.seed = 11;
    GaussianPolicy policy = make_policy(config);

    // Ratio identity right after the snapshot.
    Rng rng(123);
    double worst_ratio = 0.0;
    for (int i = 0; i < 64; ++i) {
        const std::array<double, 3> obs{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                        rng.uniform(-1.0, 1.0)};
        const auto [action, lp_old] = policy_sample(policy, obs, rng);
        const double lp_new =
            gaussian_log_prob(action, policy.actor.forward(obs)[0], policy.stddev());
        worst_ratio = std::max(worst_ratio, std::abs(prob_ratio(lp_new, lp_old) - 1.0));
    }
    if (worst_ratio > 1e-12)
        return make(6, "ppo-algebra", false,
                    fmt("post-snapshot ratio deviates by %.2e (tol 1e-12)", worst_ratio));

    // Hand cases of the clipped surrogate.
    if (clipped_surrogate(2.0, 1.0, 0.2) != 1.2)
        return make(6, "ppo-algebra", false, "clipped_surrogate(2, +1, 0.2) != 1.2");
    if (clipped_surrogate(0.5, -1.0, 0.2) != -0.8)
        return make(6, "ppo-algebra", false, "clipped_surrogate(0.5, -1, 0.2) != -0.8");

    // Clip fraction is zero while every ratio sits inside (1-eps, 1+eps).
    RolloutBuffer buffer;
    Rng rng2(321);
    for (int i = 0; i < 32; ++i) {
        Transition tr;
        tr.obs = {rng2.uniform(-1.0, 1.0), rng2.uniform(-1.0, 1.0), rng2.uniform(-1.0, 1.0)};
        const auto [action, lp] = policy_sample(policy, tr.obs, rng2);
        tr.action = action;
        tr.log_prob = lp;
        tr.reward = rng2.uniform(0.0, 1.0);
        tr.value = rng2.uniform(-1.0, 1.0);
        buffer.transitions.push_back(tr);
        buffer.advantages.push_back(rng2.uniform(-1.0, 1.0));
        buffer.returns.push_back(rng2.uniform(-1.0, 1.0));
    }
    PpoConfig tiny = config;
    tiny.lr_actor = 1e-12;
    tiny.lr_critic = 1e-12;
    tiny.epochs = 1;
    Mlp critic = make_critic(tiny);
    Rng update_rng(9);
    const UpdateStats stats = ppo_update(policy, critic, buffer, tiny, update_rng);
    if (stats.clip_fraction != 0.0)
        return make(6, "ppo-algebra", false,
                    fmt("clip fraction %.3g with near-unity ratios", stats.clip_fraction));

    return make(6, "ppo-algebra", true,
                fmt("ratio identity %.1e, hand cases exact, clip fraction 0", worst_ratio));
}

CriterionResult tuner_soundness(const std::optional<Point2>& pso_gains,
                                const std::optional<Point2>& ga_gains, bool run_if_missing,
                                std::uint64_t seed) {
    // Synthetic convex bowl over the search box.
    const Objective bowl = [](const Point2& p) {
        const double dx = p[0] - 0.002, dy = p[1] - 0.315;
        return dx * dx + dy * dy;
    };
    PsoConfig pso_cfg;
    pso_cfg.seed = seed + 1;
    const TuneResult pso_bowl = pso_optimize(pso_cfg, bowl);
    if (pso_bowl.best.fitness >= 1e-8)
        return make(7, "tuner-soundness", false,
                    fmt("pso synthetic best %.2e (need < 1e-8)", pso_bowl.best.fitness));
    GaConfig ga_cfg;
    ga_cfg.seed = seed + 2;
    const TuneResult ga_bowl = ga_optimize(ga_cfg, bowl);
    if (ga_bowl.best.fitness >= 1e-6)
        return make(7, "tuner-soundness", false,
                    fmt("ga synthetic best %.2e (need < 1e-6)", ga_bowl.best.fitness));

    // Real tuning scenario.
    const TuningScenario scenario =
        TuningScenario::standard(48.0, ConverterParams::desk());
    Point2 pso_p, ga_p;
    if (pso_gains) {
        pso_p = *pso_gains;
    } else if (run_if_missing) {
        PsoConfig cfg;
        cfg.seed = seed + 3;
        pso_p = pso_optimize(cfg, make_pi_objective(scenario)).best.position;
    } else {
        return skip(7, "tuner-soundness", "tuned PSO gains not provided");
    }
    if (ga_gains) {
        ga_p = *ga_gains;
    } else if (run_if_missing) {
        GaConfig cfg;
        cfg.seed = seed + 4;
        ga_p = ga_optimize(cfg, make_pi_objective(scenario)).best.position;
    } else {
        return skip(7, "tuner-soundness", "tuned GA gains not provided");
    }

    const double mae_ref = pi_closed_loop_mae(kReferencePsoGains, scenario);
    const double mae_pso = pi_closed_loop_mae(PiGains{pso_p[0], pso_p[1]}, scenario);
    const double mae_ga = pi_closed_loop_mae(PiGains{ga_p[0], ga_p[1]}, scenario);
    const double spread = std::abs(mae_pso - mae_ga) / std::max(mae_pso, mae_ga);

    const bool ok = mae_pso <= mae_ref && mae_ga <= mae_ref && spread <= 0.10;
    return make(7, "tuner-soundness", ok,
                fmt("synthetic pso %.1e ga %.1e; scenario mae pso %.4f ga %.4f ref %.4f "
                    "spread %.1f%% (<= 10%% required)",
                    pso_bowl.best.fitness, ga_bowl.best.fitness, mae_pso, mae_ga, mae_ref,
                    100.0 * spread));
}

CriterionResult pi_regulation() {
    const ConverterParams params = ConverterParams::desk();
    double worst = 0.0;
    for (const auto& [label, gains] :
         {std::pair{"pso", kReferencePsoGains}, std::pair{"ga", kReferenceGaGains}}) {
        for (double v_ref : {48.0, 54.0, 60.0}) {
            PiController ctl(gains, label);
            const EpisodeSpec spec =
                EpisodeSpec::regulation(v_ref, InputProfile::fixed(params.v_in_nominal));
            const Trajectory traj = run_closed_loop(ctl, params, spec);
            const StepMetrics m = step_metrics(traj, v_ref);
            const double rel = std::abs(m.steady_state_error) / v_ref;
            worst = std::max(worst, rel);
            if (rel >= 0.005)
                return make(8, "pi-regulation", false,
                            fmt("%s gains, v_ref %.0f: |e_ss| = %.3f V (%.2f%%, tol 0.5%%)",
                                label, v_ref, std::abs(m.steady_state_error), 100.0 * rel));
        }
    }
    return make(8, "pi-regulation", true,
                fmt("both gain sets, v_ref {48,54,60}: worst offset %.3f%% (tol 0.5%%)",
                    100.0 * worst));
}

CriterionResult ann_accuracy(const std::optional<AnnArtifact>& artifact) {
    if (!artifact) return skip(9, "ann-accuracy", "trained duty network not provided");
    const AnnRanges& r = artifact->ranges;
    const ConverterParams params = ConverterParams::desk();

    double worst_duty = 0.0;
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 50; ++j) {
            const double v_in = r.v_in_lo + (r.v_in_hi - r.v_in_lo) * i / 49.0;
            const double v_t = r.v_target_lo + (r.v_target_hi - r.v_target_lo) * j / 49.0;
            const double predicted =
                ann_duty(artifact->net, v_in, v_t, r, params.duty_min, params.duty_max);
            worst_duty = std::max(worst_duty, std::abs(predicted - ideal_duty(v_in, v_t)));
        }
    }
    if (worst_duty > 0.01)
        return make(9, "ann-accuracy", false,
                    fmt("max |duty err| %.4f over 50x50 grid (tol 0.01)", worst_duty));

    double worst_ss = 0.0;
    for (double v_ref : {48.0, 54.0, 60.0}) {
        AnnController ctl(*artifact);
        const EpisodeSpec spec =
            EpisodeSpec::regulation(v_ref, InputProfile::fixed(params.v_in_nominal));
        const Trajectory traj = run_closed_loop(ctl, params, spec);
        const StepMetrics m = step_metrics(traj, v_ref);
        const double rel = std::abs(m.steady_state_error) / v_ref;
        worst_ss = std::max(worst_ss, rel);
        if (rel >= 0.02)
            return make(9, "ann-accuracy", false,
                        fmt("v_ref %.0f: closed-loop offset %.2f%% (tol 2%%)", v_ref,
                            100.0 * rel));
    }
    return make(9, "ann-accuracy", true,
                fmt("grid max |duty err| %.4f (tol 0.01); worst closed-loop offset %.3f%% "
                    "(tol 2%%)",
                    worst_duty, 100.0 * worst_ss));
}

PolicyEval evaluate_policy(const GaussianPolicy& policy, double v_ref,
                           const ConverterParams& params, double band_pct) {
    PpoController ctl(policy);
    const EpisodeSpec spec =
        EpisodeSpec::regulation(v_ref, InputProfile::fixed(params.v_in_nominal));
    const Trajectory traj = run_closed_loop(ctl, params, spec);
    const StepMetrics m = step_metrics(traj, v_ref, band_pct);

    PolicyEval eval;
    eval.holds_band = m.settled;
    eval.settle_s = m.settling_time;
    const std::size_t tail = std::lround(0.2 / params.dt);
    const std::size_t n = traj.size();
    double sum = 0.0;
    for (std::size_t i = n - tail; i < n; ++i) sum += std::abs(traj.error[i]);
    eval.tail_mean_abs_e = sum / static_cast<double>(tail);
    return eval;
}

CriterionResult ppo_outcome(const std::optional<PpoCheckpoint>& checkpoint) {
    if (!checkpoint) return skip(10, "ppo-training-outcome", "trained policy not provided");
    const ConverterParams params = ConverterParams::desk();
    const double v_ref = 48.0;

    const PolicyEval trained = evaluate_policy(checkpoint->policy, v_ref, params, 5.0);
    const GaussianPolicy untrained = make_policy(checkpoint->config);
    const PolicyEval baseline = evaluate_policy(untrained, v_ref, params, 5.0);

    const bool improved = trained.tail_mean_abs_e < 0.25 * baseline.tail_mean_abs_e;
    const bool ok = trained.holds_band && improved;
    return make(10, "ppo-training-outcome", ok,
                fmt("holds 5%% band: %s (settle %.3f s); tail |e| %.3f V vs untrained %.3f V "
                    "(need < 25%%)",
                    trained.holds_band ? "yes" : "no", trained.settle_s, trained.tail_mean_abs_e,
                    baseline.tail_mean_abs_e));
}

PpoTrainOutcome train_ppo_with_fallback(double v_ref, const ConverterParams& params,
                                        std::uint64_t seed, int episodes) {
    PpoConfig config;
    config.seed = seed;
    config.episodes = episodes;
    const auto factory = [=]() {
        return BoostEnv(params,
                        EpisodeSpec::regulation(v_ref, InputProfile::fixed(params.v_in_nominal)),
                        /*termination_enabled=*/true);
    };

    PpoTrainOutcome outcome;
    outcome.config = config;
    bool default_ok = false;
    try {
        outcome.result = train(factory, config);
        default_ok =
            evaluate_policy(outcome.result.policy, v_ref, params, 5.0).holds_band;
        outcome.note = "default learning rate 0.05";
    } catch (const std::runtime_error& e) {
        outcome.note = std::string("default learning rate diverged: ") + e.what();
    }
    if (default_ok) return outcome;

    PpoConfig fallback = config;
    fallback.lr_actor = 3e-3;
    fallback.lr_critic = 3e-3;
    outcome.config = fallback;
    outcome.used_fallback = true;
    outcome.note += "; retrained with fallback learning rate 3e-3";
    outcome.result = train(factory, fallback);
    return outcome;
}

CriterionResult comparison_orderings(const std::optional<Report>& report) {
    if (!report) return skip(11, "comparison-orderings", "comparison report not provided");

    const auto row = [&](const char* c, const char* p, double v) -> const ReportRow* {
        const ReportRow* r = report->find(c, p, v);
        return (r && r->ok) ? r : nullptr;
    };
    const auto settle = [](const ReportRow* r) {
        return r->metrics.settled ? r->metrics.settling_time
                                  : std::numeric_limits<double>::infinity();
    };

    std::ostringstream detail;
    bool all_ok = true;
    int checks = 0;
    const auto record = [&](const std::string& label, bool ok) {
        ++checks;
        if (!ok) all_ok = false;
        detail << label << (ok ? " ok" : " FAIL") << "; ";
    };

    for (double v : {48.0, 54.0, 60.0}) {
        const ReportRow* rl_f = row("rl", "fixed", v);
        const ReportRow* rl_s = row("rl", "step", v);
        const ReportRow* ann_f = row("ann", "fixed", v);
        const ReportRow* ann_s = row("ann", "step", v);
        const ReportRow* ga_f = row("pi-ga", "fixed", v);
        const ReportRow* ga_s = row("pi-ga", "step", v);
        const ReportRow* pso_f = row("pi-pso", "fixed", v);
        const ReportRow* pso_s = row("pi-pso", "step", v);
        if (!rl_f || !rl_s || !ann_f || !ann_s || !ga_f || !ga_s || !pso_f || !pso_s)
            return skip(11, "comparison-orderings",
                        fmt("missing grid cells at v_ref %.0f (artifact absent?)", v));

        // (a) step profile: each PI variant overshoots more than RL and ANN.
        record(fmt("a@%.0f pi>rl", v), ga_s->metrics.overshoot_pct > rl_s->metrics.overshoot_pct &&
                                           pso_s->metrics.overshoot_pct >
                                               rl_s->metrics.overshoot_pct);
        record(fmt("a@%.0f pi>ann", v),
               ga_s->metrics.overshoot_pct > ann_s->metrics.overshoot_pct &&
                   pso_s->metrics.overshoot_pct > ann_s->metrics.overshoot_pct);
        // (b) RL keeps its settling within 35% across profiles; PI degrades > 50%.
        // The RL side demands actual settling on both profiles; a pair of
        // never-settling runs demonstrates nothing.
        record(fmt("b@%.0f rl<=1.35x", v),
               rl_f->metrics.settled && rl_s->metrics.settled &&
                   settle(rl_s) <= 1.35 * settle(rl_f));
        record(fmt("b@%.0f pi>1.5x", v),
               ga_f->metrics.settled && pso_f->metrics.settled &&
                   settle(ga_s) > 1.5 * settle(ga_f) && settle(pso_s) > 1.5 * settle(pso_f));
        // (c) fixed profile: RL settles faster than ANN.
        record(fmt("c@%.0f rl<ann", v), settle(rl_f) < settle(ann_f));
    }
    return make(11, "comparison-orderings", all_ok,
                fmt("%d checks: %s", checks, detail.str().c_str()));
}

}  // namespace boostctl::acceptance
