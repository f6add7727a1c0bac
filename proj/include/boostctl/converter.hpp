#pragma once

#include <string>

namespace boostctl {

// Physical constants of the averaged boost plant plus the control sample step.
struct ConverterParams {
    double v_in_nominal = 24.0;       // V
    double load_resistance = 50.0;    // ohm
    double inductance = 10e-6;        // H
    double capacitance = 400e-6;      // F
    double duty_min = 0.05;
    double duty_max = 0.95;
    double dt = 2e-4;                 // s

    void validate() const;

    // Published values verbatim (C = 400 mF). The resulting RC constant is
    // 20 s, so nothing settles inside a 1 s horizon on this set.
    static ConverterParams paper();
    // Same circuit with C = 400 uF, which gives sub-second dynamics at the
    // same sample rate. All comparative runs default to this set.
    static ConverterParams desk();
    static ConverterParams named(const std::string& name);
};

// State vector: x1 = inductor current, x2 = capacitor (= output) voltage.
struct ConverterState {
    double i_l = 0.0;  // A
    double v_c = 0.0;  // V
};

struct StateDeriv {
    double di_l = 0.0;  // A/s
    double dv_c = 0.0;  // V/s
};

// Duty-averaged dynamics: the closed-mode and open-mode linear systems blended
// by d and (1-d):
//   di_l/dt = (v_in - (1-d) v_c) / L
//   dv_c/dt = ((1-d) i_l - v_c/R) / C
StateDeriv averaged_derivative(const ConverterParams& params, const ConverterState& state,
                               double duty, double v_in);

// One classical RK4 step with duty and v_in held constant (zero-order hold).
// The inductor current is clamped at >= 0 after the step; the diode blocks
// reverse current and discontinuous-conduction modelling is out of scope.
ConverterState integrate_step(const ConverterParams& params, const ConverterState& state,
                              double duty, double v_in, double dt);

enum class ProfileKind { Fixed, Step };

struct InputProfile {
    ProfileKind kind = ProfileKind::Fixed;
    double v_initial = 24.0;
    double v_final = 24.0;
    double step_time = 0.0;  // s

    static InputProfile fixed(double v);
    static InputProfile step(double v_initial, double v_final, double step_time);
    void validate() const;
};

// Fixed profiles return v_initial always; step profiles switch to v_final at
// t >= step_time.
double input_profile_at(const InputProfile& profile, double t);

}  // namespace boostctl
