#include "boostctl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace boostctl {

double PiController::act(const ControlInputs& in) {
    const PiOutput out = pi_step(gains_, state_, in.error, in.dt, in.duty_min, in.duty_max);
    state_ = out.state;
    return out.duty;
}

double AnnController::act(const ControlInputs& in) {
    bool extrapolated = false;
    const double duty = ann_duty(artifact_.net, in.v_in, in.v_ref, artifact_.ranges, in.duty_min,
                                 in.duty_max, &extrapolated);
    if (extrapolated && !warned_) {
        std::fprintf(stderr,
                     "ann controller: (v_in=%.3g, v_ref=%.3g) lies outside the training box; "
                     "extrapolating\n",
                     in.v_in, in.v_ref);
        warned_ = true;
    }
    return duty;
}

double PpoController::act(const ControlInputs& in) {
    const Observation obs{in.v_out, in.error, in.error_rate};
    const auto nobs = normalize_observation(obs, in.v_ref, in.dt);
    return policy_.mean_action(nobs);
}

Trajectory run_closed_loop(Controller& controller, const ConverterParams& params,
                           const EpisodeSpec& spec) {
    BoostEnv env(params, spec, /*termination_enabled=*/false);
    Observation obs = env.reset();
    controller.reset();

    Trajectory traj;
    traj.dt = params.dt;
    const std::size_t n = static_cast<std::size_t>(spec.horizon_steps);
    traj.v_in.reserve(n + 1);
    traj.duty.reserve(n + 1);
    traj.i_l.reserve(n + 1);
    traj.v_out.reserve(n + 1);
    traj.error.reserve(n + 1);
    traj.reward.reserve(n + 1);

    traj.v_in.push_back(input_profile_at(spec.input_profile, 0.0));
    traj.duty.push_back(0.0);  // patched to the first command below
    traj.i_l.push_back(0.0);
    traj.v_out.push_back(0.0);
    traj.error.push_back(spec.v_ref);
    traj.reward.push_back(0.0);

    bool first = true;
    while (!env.done()) {
        const double t = env.time();
        ControlInputs in;
        in.t = t;
        in.dt = params.dt;
        in.v_in = input_profile_at(spec.input_profile, t);
        in.v_ref = spec.v_ref;
        in.v_out = obs.v_out;
        in.error = obs.error;
        in.error_rate = obs.error_rate;
        in.duty_min = params.duty_min;
        in.duty_max = params.duty_max;

        const auto sr = env.step(controller.act(in));
        if (first) {
            traj.duty[0] = env.last_duty();
            first = false;
        }
        obs = sr.obs;
        traj.v_in.push_back(in.v_in);
        traj.duty.push_back(env.last_duty());
        traj.i_l.push_back(env.state().i_l);
        traj.v_out.push_back(env.state().v_c);
        traj.error.push_back(sr.obs.error);
        traj.reward.push_back(sr.reward);
    }
    return traj;
}

ConverterParams ScenarioConfig::converter_params() const {
    return ConverterParams::named(params_set);
}

EpisodeSpec ScenarioConfig::episode_spec() const {
    EpisodeSpec spec;
    spec.v_ref = v_ref;
    spec.v_up = v_up > 0.0 ? v_up : 1.2 * v_ref;
    spec.v_low = v_low > 0.0 ? v_low : 0.8 * v_ref;
    spec.horizon_steps = horizon_steps;
    spec.input_profile = profile;
    spec.validate();
    return spec;
}

std::string ScenarioConfig::profile_name() const {
    return profile.kind == ProfileKind::Fixed ? "fixed" : "step";
}

std::string ScenarioConfig::id() const {
    std::ostringstream ss;
    ss << profile_name() << "-" << v_ref;
    return ss.str();
}

namespace {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
    }
}

InputProfile profile_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j, {"kind", "v_initial", "v_final", "step_time"}, "profile");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fixed") return InputProfile::fixed(j.at("v_initial").get<double>());
    if (kind == "step")
        return InputProfile::step(j.at("v_initial").get<double>(), j.at("v_final").get<double>(),
                                  j.at("step_time").get<double>());
    throw std::invalid_argument("config: profile kind must be fixed|step, got " + kind);
}

nlohmann::json profile_to_json(const InputProfile& p) {
    nlohmann::json j;
    j["kind"] = p.kind == ProfileKind::Fixed ? "fixed" : "step";
    j["v_initial"] = p.v_initial;
    if (p.kind == ProfileKind::Step) {
        j["v_final"] = p.v_final;
        j["step_time"] = p.step_time;
    }
    return j;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    reject_unknown_keys(
        j, {"params_set", "v_ref", "profile", "horizon_steps", "v_up", "v_low", "seed"},
        "scenario");
    ScenarioConfig cfg;
    if (j.contains("params_set")) cfg.params_set = j["params_set"].get<std::string>();
    if (j.contains("v_ref")) cfg.v_ref = j["v_ref"].get<double>();
    if (j.contains("profile")) cfg.profile = profile_from_json(j["profile"]);
    if (j.contains("horizon_steps")) cfg.horizon_steps = j["horizon_steps"].get<int>();
    if (j.contains("v_up")) cfg.v_up = j["v_up"].get<double>();
    if (j.contains("v_low")) cfg.v_low = j["v_low"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    ConverterParams::named(cfg.params_set);  // validates the name
    cfg.episode_spec();                      // validates the rest
    return cfg;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string ScenarioConfig::to_json_text() const {
    nlohmann::json j;
    j["params_set"] = params_set;
    j["v_ref"] = v_ref;
    j["profile"] = profile_to_json(profile);
    j["horizon_steps"] = horizon_steps;
    if (v_up > 0.0) j["v_up"] = v_up;
    if (v_low > 0.0) j["v_low"] = v_low;
    j["seed"] = seed;
    return j.dump(2);
}

const ReportRow* Report::find(const std::string& controller, const std::string& profile,
                              double v_ref) const {
    for (const auto& row : rows) {
        if (row.controller == controller && row.profile == profile &&
            std::abs(row.v_ref - v_ref) < 1e-9)
            return &row;
    }
    return nullptr;
}

Report run_experiment(const ExperimentArtifacts& artifacts, const ExperimentOptions& options) {
    const ConverterParams params = ConverterParams::named(options.params_set);

    struct Cell {
        std::string controller;
        double v_ref;
        InputProfile profile;
        std::string profile_name;
    };
    const InputProfile fixed = InputProfile::fixed(params.v_in_nominal);
    const InputProfile step = InputProfile::step(params.v_in_nominal, 26.0, 0.5);

    std::vector<Cell> cells;
    for (const char* controller : {"pi-ga", "pi-pso", "ann", "rl"}) {
        for (double v_ref : options.v_refs) {
            cells.push_back({controller, v_ref, fixed, "fixed"});
            cells.push_back({controller, v_ref, step, "step"});
        }
    }

    Report report;
    report.params_set = options.params_set;
    report.seed = options.seed;
    report.rows.resize(cells.size());

    const auto make_controller = [&](const std::string& id) -> std::unique_ptr<Controller> {
        if (id == "pi-ga")
            return artifacts.pi_ga
                       ? std::make_unique<PiController>(*artifacts.pi_ga, "pi-ga")
                       : nullptr;
        if (id == "pi-pso")
            return artifacts.pi_pso
                       ? std::make_unique<PiController>(*artifacts.pi_pso, "pi-pso")
                       : nullptr;
        if (id == "ann")
            return artifacts.ann ? std::make_unique<AnnController>(*artifacts.ann) : nullptr;
        if (id == "rl")
            return artifacts.rl ? std::make_unique<PpoController>(*artifacts.rl) : nullptr;
        return nullptr;
    };

    // Cells are independent; rows land in per-index slots.
#pragma omp parallel for schedule(dynamic, 1)
    for (long ci = 0; ci < static_cast<long>(cells.size()); ++ci) {
        const Cell& cell = cells[static_cast<std::size_t>(ci)];
        ReportRow row;
        row.controller = cell.controller;
        row.profile = cell.profile_name;
        row.v_ref = cell.v_ref;
        row.scenario = cell.profile_name + "-" + std::to_string(static_cast<int>(cell.v_ref));
        auto controller = make_controller(cell.controller);
        if (!controller) {
            row.ok = false;
            row.error = "missing artifact";
        } else {
            try {
                EpisodeSpec spec =
                    EpisodeSpec::regulation(cell.v_ref, cell.profile, options.horizon_steps);
                const Trajectory traj = run_closed_loop(*controller, params, spec);
                row.metrics = step_metrics(traj, cell.v_ref);
                row.mae_v = mae(traj, cell.v_ref);
                row.ok = true;
                if (!options.trajectory_dir.empty()) {
                    write_trajectory_csv(options.trajectory_dir + "/" + row.controller + "_" +
                                             row.scenario + ".csv",
                                         traj);
                }
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
            }
        }
        report.rows[static_cast<std::size_t>(ci)] = std::move(row);
    }
    return report;
}

void write_metrics_csv(const std::string& path, const Report& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "controller,scenario,v_ref,rise_s,settle_s,overshoot_pct,undershoot_pct,mae\n";
    char line[320];
    for (const auto& row : report.rows) {
        if (!row.ok) {
            std::snprintf(line, sizeof line, "%s,%s,%g,,,,,\n", row.controller.c_str(),
                          row.scenario.c_str(), row.v_ref);
        } else {
            std::snprintf(line, sizeof line, "%s,%s,%g,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                          row.controller.c_str(), row.scenario.c_str(), row.v_ref,
                          row.metrics.rise_time, row.metrics.settling_time,
                          row.metrics.overshoot_pct, row.metrics.undershoot_pct, row.mae_v);
        }
        out << line;
    }
}

namespace {

nlohmann::json row_to_json(const ReportRow& row) {
    nlohmann::json j;
    j["controller"] = row.controller;
    j["scenario"] = row.scenario;
    j["profile"] = row.profile;
    j["v_ref"] = row.v_ref;
    j["ok"] = row.ok;
    j["error"] = row.error;
    j["rise_s"] = row.metrics.rise_time;
    j["settle_s"] = row.metrics.settling_time;
    j["settled"] = row.metrics.settled;
    j["overshoot_pct"] = row.metrics.overshoot_pct;
    j["undershoot_pct"] = row.metrics.undershoot_pct;
    j["ss_error_v"] = row.metrics.steady_state_error;
    j["mae_v"] = row.mae_v;
    return j;
}

ReportRow row_from_json(const nlohmann::json& j) {
    ReportRow row;
    row.controller = j.at("controller").get<std::string>();
    row.scenario = j.at("scenario").get<std::string>();
    row.profile = j.at("profile").get<std::string>();
    row.v_ref = j.at("v_ref").get<double>();
    row.ok = j.at("ok").get<bool>();
    row.error = j.at("error").get<std::string>();
    row.metrics.rise_time = j.at("rise_s").get<double>();
    row.metrics.settling_time = j.at("settle_s").get<double>();
    row.metrics.settled = j.at("settled").get<bool>();
    row.metrics.overshoot_pct = j.at("overshoot_pct").get<double>();
    row.metrics.undershoot_pct = j.at("undershoot_pct").get<double>();
    row.metrics.steady_state_error = j.at("ss_error_v").get<double>();
    row.mae_v = j.at("mae_v").get<double>();
    return row;
}

}  // namespace

void write_report_json(const std::string& path, const Report& report) {
    nlohmann::json j;
    j["params_set"] = report.params_set;
    j["seed"] = report.seed;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : report.rows) j["rows"].push_back(row_to_json(row));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

Report load_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    nlohmann::json j;
    in >> j;
    Report report;
    report.params_set = j.at("params_set").get<std::string>();
    report.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& jr : j.at("rows")) report.rows.push_back(row_from_json(jr));
    return report;
}

namespace {

// Published step-response characteristics, mapped by controller and profile.
constexpr ReferenceRow kReferenceRows[] = {
    {"pi-ga", "fixed", 48.0, 0.005, 0.35, 3.6e-5, 2.5e-5},
    {"pi-ga", "fixed", 54.0, 0.16, 0.213, 5.6e-5, 2.5e-5},
    {"pi-ga", "fixed", 60.0, 0.12, 0.163, 4.83e-5, 2.5e-5},
    {"pi-pso", "fixed", 48.0, 0.0049, 0.343, 5.127e-5, 2.516e-5},
    {"pi-pso", "fixed", 54.0, 0.154, 0.212, 5.39e-5, 2.516e-5},
    {"pi-pso", "fixed", 60.0, 0.12, 0.162, 4.59e-5, 2.516e-5},
    {"ann", "fixed", 48.0, 0.0411, 0.1709, 0.0, 1.2711e-7},
    {"ann", "fixed", 54.0, 0.1102, 0.2928, 0.0, 1.2543e-7},
    {"ann", "fixed", 60.0, 0.1840, 0.4248, 0.0, 1.2192e-7},
    {"rl", "fixed", 48.0, 0.056, 0.123, 0.364, 7.306e-7},
    {"rl", "fixed", 54.0, 0.135, 0.218, 0.367, 6.512e-7},
    {"rl", "fixed", 60.0, 0.239, 0.36, 0.275, 5.829e-7},
    {"pi-ga", "step", 48.0, 0.33, 0.595, 2.35, 0.0},
    {"pi-ga", "step", 54.0, 0.19, 0.594, 2.248, 0.0},
    {"pi-ga", "step", 60.0, 0.14, 0.593, 2.352, 0.0},
    {"pi-pso", "step", 48.0, 0.327, 0.594, 2.349, 0.0},
    {"pi-pso", "step", 54.0, 0.19, 0.593, 2.347, 0.0},
    {"pi-pso", "step", 60.0, 0.142, 0.594, 2.35, 0.0},
    {"ann", "step", 48.0, 0.041, 0.171, 0.0, 0.0},
    {"ann", "step", 54.0, 0.11, 0.296, 0.0, 0.0},
    {"ann", "step", 60.0, 0.186, 0.435, 0.0, 0.0},
    {"rl", "step", 48.0, 0.093, 0.163, 0.347, 0.0},
    {"rl", "step", 54.0, 0.155, 0.274, 0.056, 0.0},
    {"rl", "step", 60.0, 0.259, 0.395, 0.161, 0.0},
};

}  // namespace

std::span<const ReferenceRow> reference_table() { return kReferenceRows; }

void write_reference_comparison_csv(const std::string& path, const Report& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "controller,profile,v_ref,ref_rise_s,got_rise_s,ref_settle_s,got_settle_s,"
           "ref_overshoot_pct,got_overshoot_pct,ref_undershoot_pct,got_undershoot_pct\n";
    char line[512];
    for (const ReferenceRow& ref : kReferenceRows) {
        const ReportRow* got = report.find(ref.controller, ref.profile, ref.v_ref);
        if (got && got->ok) {
            std::snprintf(line, sizeof line, "%s,%s,%g,%g,%.6g,%g,%.6g,%g,%.6g,%g,%.6g\n",
                          ref.controller, ref.profile, ref.v_ref, ref.rise_s,
                          got->metrics.rise_time, ref.settle_s, got->metrics.settling_time,
                          ref.overshoot_pct, got->metrics.overshoot_pct, ref.undershoot_pct,
                          got->metrics.undershoot_pct);
        } else {
            std::snprintf(line, sizeof line, "%s,%s,%g,%g,,%g,,%g,,%g,\n", ref.controller,
                          ref.profile, ref.v_ref, ref.rise_s, ref.settle_s, ref.overshoot_pct,
                          ref.undershoot_pct);
        }
        out << line;
    }
}

}  // namespace boostctl
