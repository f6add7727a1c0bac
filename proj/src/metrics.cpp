#include "boostctl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace boostctl {

void Trajectory::validate() const {
    if (v_out.empty()) throw std::invalid_argument("trajectory: empty");
    if (dt <= 0.0) throw std::invalid_argument("trajectory: dt must be > 0");
    const std::size_t n = v_out.size();
    if (v_in.size() != n || duty.size() != n || i_l.size() != n || error.size() != n ||
        reward.size() != n)
        throw std::invalid_argument("trajectory: column lengths differ");
}

namespace {

// First time v reaches `threshold` from below, interpolated; -1 if never.
double first_rising_crossing(const Trajectory& traj, double threshold) {
    const auto& v = traj.v_out;
    if (v[0] >= threshold) return 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] >= threshold) {
            const double frac = (threshold - v[i - 1]) / (v[i] - v[i - 1]);
            return (static_cast<double>(i - 1) + frac) * traj.dt;
        }
    }
    return -1.0;
}

}  // namespace

StepMetrics step_metrics(const Trajectory& traj, double v_ref, double settle_band_pct,
                         double rise_lo_pct, double rise_hi_pct) {
    traj.validate();
    if (v_ref <= 0.0) throw std::invalid_argument("step_metrics: v_ref must be > 0");
    if (settle_band_pct <= 0.0) throw std::invalid_argument("step_metrics: band must be > 0");
    if (!(0.0 < rise_lo_pct && rise_lo_pct < rise_hi_pct && rise_hi_pct < 100.0))
        throw std::invalid_argument("step_metrics: need 0 < rise_lo < rise_hi < 100");

    const auto& v = traj.v_out;
    const std::size_t n = v.size();
    StepMetrics m;

    const double t_lo = first_rising_crossing(traj, rise_lo_pct / 100.0 * v_ref);
    const double t_hi = first_rising_crossing(traj, rise_hi_pct / 100.0 * v_ref);
    m.rise_time = (t_lo >= 0.0 && t_hi >= 0.0) ? t_hi - t_lo : -1.0;

    // Settling: latest sample outside the band decides; the entry instant is
    // interpolated on the following segment.
    const double band = settle_band_pct / 100.0 * v_ref;
    std::ptrdiff_t last_out = -1;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(v[i] - v_ref) > band) last_out = static_cast<std::ptrdiff_t>(i);
    if (last_out < 0) {
        m.settled = true;
        m.settling_time = 0.0;
    } else if (last_out == static_cast<std::ptrdiff_t>(n - 1)) {
        m.settled = false;
        m.settling_time = -1.0;
    } else {
        const std::size_t j = static_cast<std::size_t>(last_out);
        const double edge = v[j] > v_ref + band ? v_ref + band : v_ref - band;
        const double frac = (edge - v[j]) / (v[j + 1] - v[j]);
        m.settled = true;
        m.settling_time = (static_cast<double>(j) + frac) * traj.dt;
    }

    const double v_max = *std::max_element(v.begin(), v.end());
    m.overshoot_pct = std::max(0.0, (v_max - v_ref) / v_ref * 100.0);

    // Undershoot counts only after the reference was first reached.
    std::size_t reached = n;
    for (std::size_t i = 0; i < n; ++i)
        if (v[i] >= v_ref) {
            reached = i;
            break;
        }
    if (reached < n) {
        double v_min = v[reached];
        for (std::size_t i = reached; i < n; ++i) v_min = std::min(v_min, v[i]);
        m.undershoot_pct = std::max(0.0, (v_ref - v_min) / v_ref * 100.0);
    }

    const std::size_t tail = std::max<std::size_t>(1, n / 20);
    double sum = 0.0;
    for (std::size_t i = n - tail; i < n; ++i) sum += v[i];
    m.steady_state_error = v_ref - sum / static_cast<double>(tail);
    return m;
}

double mae(const Trajectory& traj, double v_ref) {
    traj.validate();
    double sum = 0.0;
    for (double v : traj.v_out) sum += std::abs(v_ref - v);
    return sum / static_cast<double>(traj.size());
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    traj.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t,v_in,duty,i_L,v_out,e,reward\n";
    char line[256];
    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      traj.time(i), traj.v_in[i], traj.duty[i], traj.i_l[i], traj.v_out[i],
                      traj.error[i], traj.reward[i]);
        out << line;
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,v_in,duty,i_L,v_out,e,reward", 0) != 0)
        throw std::runtime_error("trajectory csv: bad header in " + path);

    Trajectory traj;
    std::vector<double> times;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double vals[7];
        char comma;
        for (int c = 0; c < 7; ++c) {
            if (!(ss >> vals[c])) throw std::runtime_error("trajectory csv: bad row in " + path);
            if (c < 6) ss >> comma;
        }
        times.push_back(vals[0]);
        traj.v_in.push_back(vals[1]);
        traj.duty.push_back(vals[2]);
        traj.i_l.push_back(vals[3]);
        traj.v_out.push_back(vals[4]);
        traj.error.push_back(vals[5]);
        traj.reward.push_back(vals[6]);
    }
    if (times.size() >= 2) traj.dt = times[1] - times[0];
    traj.validate();
    return traj;
}

}  // namespace boostctl
