#pragma once

namespace boostctl {

struct PiGains {
    double kp = 0.0;  // per volt
    double ki = 0.0;  // per volt-second
};

struct PiState {
    double integral = 0.0;  // V*s
};

struct PiOutput {
    double duty = 0.0;
    PiState state;
};

// Discrete PI step: accumulate the error by the rectangle rule, form
// kp*e + ki*integral, clamp to the duty range. Anti-windup by conditional
// integration: a step whose output saturates keeps the previous integral.
PiOutput pi_step(const PiGains& gains, const PiState& state, double error, double dt,
                 double duty_min, double duty_max);

PiState pi_reset();

}  // namespace boostctl
