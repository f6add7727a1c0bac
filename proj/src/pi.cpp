#include "boostctl/pi.hpp"

#include <algorithm>
#include <stdexcept>

namespace boostctl {

PiOutput pi_step(const PiGains& gains, const PiState& state, double error, double dt,
                 double duty_min, double duty_max) {
    if (dt <= 0.0) throw std::invalid_argument("pi_step: dt must be > 0");
    const double integral = state.integral + error * dt;
    const double raw = gains.kp * error + gains.ki * integral;
    const double duty = std::clamp(raw, duty_min, duty_max);
    PiOutput out;
    out.duty = duty;
    out.state.integral = (duty == raw) ? integral : state.integral;
    return out;
}

PiState pi_reset() { return PiState{}; }

}  // namespace boostctl
