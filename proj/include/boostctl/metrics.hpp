#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace boostctl {

// Uniformly sampled closed-loop run. Row i is sampled at t = i*dt; row 0 holds
// the initial state with the first commanded duty repeated. All columns have
// equal length.
struct Trajectory {
    double dt = 2e-4;
    std::vector<double> v_in;
    std::vector<double> duty;
    std::vector<double> i_l;
    std::vector<double> v_out;
    std::vector<double> error;
    std::vector<double> reward;

    std::size_t size() const { return v_out.size(); }
    double time(std::size_t i) const { return static_cast<double>(i) * dt; }
    void validate() const;
};

// Step-response characteristics relative to v_ref. Times use linear
// interpolation between samples; unavailable times are -1. The steady-state
// error is v_ref minus the mean output over the final 5% of the run, so the
// small clamp-induced limit cycle does not alias into the offset.
struct StepMetrics {
    double rise_time = -1.0;          // s, rise_lo% -> rise_hi% of v_ref
    double settling_time = -1.0;      // s, earliest entry into the band held to the end
    double overshoot_pct = 0.0;       // max excursion above v_ref
    double undershoot_pct = 0.0;      // max dip below v_ref after first reaching it
    double steady_state_error = 0.0;  // V
    bool settled = false;
};

StepMetrics step_metrics(const Trajectory& traj, double v_ref, double settle_band_pct = 2.0,
                         double rise_lo_pct = 10.0, double rise_hi_pct = 90.0);

// Mean absolute output-voltage error; the tuners' fitness.
double mae(const Trajectory& traj, double v_ref);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace boostctl
