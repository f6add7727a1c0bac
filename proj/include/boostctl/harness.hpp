#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boostctl/ann.hpp"
#include "boostctl/converter.hpp"
#include "boostctl/env.hpp"
#include "boostctl/metrics.hpp"
#include "boostctl/pi.hpp"
#include "boostctl/ppo.hpp"

namespace boostctl {

// Tuned gains from the reference study, used for regulation checks and as the
// default PI artifacts of the comparison grid.
inline constexpr PiGains kReferencePsoGains{0.002, 0.315};
inline constexpr PiGains kReferenceGaGains{0.0021, 0.314};

// Everything a controller may look at in one control period.
struct ControlInputs {
    double t = 0.0;
    double dt = 2e-4;
    double v_in = 24.0;   // supply voltage over this period
    double v_ref = 48.0;
    double v_out = 0.0;
    double error = 0.0;
    double error_rate = 0.0;
    double duty_min = 0.05;
    double duty_max = 0.95;
};

class Controller {
public:
    virtual ~Controller() = default;
    virtual void reset() {}
    virtual double act(const ControlInputs& in) = 0;
    virtual std::string name() const = 0;
};

class ConstantDutyController final : public Controller {
public:
    explicit ConstantDutyController(double duty) : duty_(duty) {}
    double act(const ControlInputs&) override { return duty_; }
    std::string name() const override { return "const"; }

private:
    double duty_;
};

class PiController final : public Controller {
public:
    PiController(PiGains gains, std::string name = "pi") : gains_(gains), name_(std::move(name)) {}
    void reset() override { state_ = pi_reset(); }
    double act(const ControlInputs& in) override;
    std::string name() const override { return name_; }

private:
    PiGains gains_;
    PiState state_;
    std::string name_;
};

// Feedforward: reads the supply and the reference, never the output.
class AnnController final : public Controller {
public:
    explicit AnnController(AnnArtifact artifact) : artifact_(std::move(artifact)) {}
    double act(const ControlInputs& in) override;
    std::string name() const override { return "ann"; }

private:
    AnnArtifact artifact_;
    bool warned_ = false;
};

// Deterministic evaluation: the Gaussian collapses to its mean action.
class PpoController final : public Controller {
public:
    explicit PpoController(GaussianPolicy policy) : policy_(std::move(policy)) {}
    double act(const ControlInputs& in) override;
    std::string name() const override { return "rl"; }

private:
    GaussianPolicy policy_;
};

// Full-horizon closed loop at the control rate. Limit termination never
// applies here; it is a training device only.
Trajectory run_closed_loop(Controller& controller, const ConverterParams& params,
                           const EpisodeSpec& spec);

// One cell of the comparison grid, parsed from CLI flags or a JSON config
// document (unknown keys are rejected).
struct ScenarioConfig {
    std::string params_set = "desk";
    double v_ref = 48.0;
    InputProfile profile = InputProfile::fixed(24.0);
    int horizon_steps = 5000;
    double v_up = -1.0;   // defaults to 1.2 * v_ref when negative
    double v_low = -1.0;  // defaults to 0.8 * v_ref when negative
    std::uint64_t seed = 0;

    ConverterParams converter_params() const;
    EpisodeSpec episode_spec() const;
    std::string profile_name() const;
    std::string id() const;  // e.g. "fixed-48"

    static ScenarioConfig from_json_text(const std::string& text);
    static ScenarioConfig from_json_file(const std::string& path);
    std::string to_json_text() const;
};

struct ReportRow {
    std::string controller;
    std::string scenario;
    std::string profile;
    double v_ref = 0.0;
    bool ok = false;
    std::string error;
    StepMetrics metrics;
    double mae_v = 0.0;
};

struct Report {
    std::string params_set = "desk";
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;

    const ReportRow* find(const std::string& controller, const std::string& profile,
                          double v_ref) const;
};

struct ExperimentArtifacts {
    std::optional<PiGains> pi_pso;
    std::optional<PiGains> pi_ga;
    std::optional<AnnArtifact> ann;
    std::optional<GaussianPolicy> rl;
};

struct ExperimentOptions {
    std::string params_set = "desk";
    std::vector<double> v_refs{48.0, 54.0, 60.0};
    int horizon_steps = 5000;
    std::uint64_t seed = 0;
    std::string trajectory_dir;  // when set, per-cell CSVs are written here
};

// Controllers x {fixed, step} x v_refs. A missing artifact fails its cells
// loudly and the run continues; the grid is never silently truncated.
Report run_experiment(const ExperimentArtifacts& artifacts, const ExperimentOptions& options);

void write_metrics_csv(const std::string& path, const Report& report);
void write_report_json(const std::string& path, const Report& report);
Report load_report_json(const std::string& path);

// Reference step-response characteristics bundled for side-by-side reporting.
// They were produced by a different (switching-level) simulator and are never
// asserted as equalities.
struct ReferenceRow {
    const char* controller;
    const char* profile;
    double v_ref;
    double rise_s;
    double settle_s;
    double overshoot_pct;
    double undershoot_pct;
};

std::span<const ReferenceRow> reference_table();
void write_reference_comparison_csv(const std::string& path, const Report& report);

}  // namespace boostctl
