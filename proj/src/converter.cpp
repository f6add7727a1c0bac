#include "boostctl/converter.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace boostctl {

void ConverterParams::validate() const {
    if (load_resistance <= 0.0 || inductance <= 0.0 || capacitance <= 0.0 || dt <= 0.0)
        throw std::invalid_argument("converter params: R, L, C and dt must be positive");
    if (!(0.0 <= duty_min && duty_min < duty_max && duty_max < 1.0))
        throw std::invalid_argument("converter params: need 0 <= duty_min < duty_max < 1");
}

ConverterParams ConverterParams::paper() {
    ConverterParams p;
    p.capacitance = 400e-3;
    return p;
}

ConverterParams ConverterParams::desk() {
    ConverterParams p;
    p.capacitance = 400e-6;
    return p;
}

ConverterParams ConverterParams::named(const std::string& name) {
    if (name == "paper") return paper();
    if (name == "desk") return desk();
    throw std::invalid_argument("unknown parameter set: " + name + " (expected paper|desk)");
}

StateDeriv averaged_derivative(const ConverterParams& params, const ConverterState& state,
                               double duty, double v_in) {
    if (!(duty >= 0.0 && duty < 1.0))
        throw std::invalid_argument("averaged_derivative: duty must lie in [0, 1)");
    const double off = 1.0 - duty;
    return {(v_in - off * state.v_c) / params.inductance,
            (off * state.i_l - state.v_c / params.load_resistance) / params.capacitance};
}

ConverterState integrate_step(const ConverterParams& params, const ConverterState& state,
                              double duty, double v_in, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("integrate_step: dt must be > 0");

    const StateDeriv k1 = averaged_derivative(params, state, duty, v_in);
    const ConverterState s2{state.i_l + 0.5 * dt * k1.di_l, state.v_c + 0.5 * dt * k1.dv_c};
    const StateDeriv k2 = averaged_derivative(params, s2, duty, v_in);
    const ConverterState s3{state.i_l + 0.5 * dt * k2.di_l, state.v_c + 0.5 * dt * k2.dv_c};
    const StateDeriv k3 = averaged_derivative(params, s3, duty, v_in);
    const ConverterState s4{state.i_l + dt * k3.di_l, state.v_c + dt * k3.dv_c};
    const StateDeriv k4 = averaged_derivative(params, s4, duty, v_in);

    ConverterState next{
        state.i_l + dt / 6.0 * (k1.di_l + 2.0 * k2.di_l + 2.0 * k3.di_l + k4.di_l),
        state.v_c + dt / 6.0 * (k1.dv_c + 2.0 * k2.dv_c + 2.0 * k3.dv_c + k4.dv_c)};
    if (!std::isfinite(next.i_l) || !std::isfinite(next.v_c)) {
        std::ostringstream msg;
        msg << "integrate_step: non-finite state after step (from i_l=" << state.i_l
            << " v_c=" << state.v_c << " duty=" << duty << " v_in=" << v_in << " dt=" << dt
            << ")";
        throw std::runtime_error(msg.str());
    }
    next.i_l = std::max(0.0, next.i_l);
    return next;
}

InputProfile InputProfile::fixed(double v) {
    InputProfile p;
    p.kind = ProfileKind::Fixed;
    p.v_initial = v;
    p.v_final = v;
    p.step_time = 0.0;
    p.validate();
    return p;
}

InputProfile InputProfile::step(double v_initial, double v_final, double step_time) {
    InputProfile p;
    p.kind = ProfileKind::Step;
    p.v_initial = v_initial;
    p.v_final = v_final;
    p.step_time = step_time;
    p.validate();
    return p;
}

void InputProfile::validate() const {
    if (v_initial <= 0.0 || v_final <= 0.0)
        throw std::invalid_argument("input profile: voltages must be positive");
    if (step_time < 0.0) throw std::invalid_argument("input profile: step_time must be >= 0");
}

double input_profile_at(const InputProfile& profile, double t) {
    if (t < 0.0) throw std::invalid_argument("input_profile_at: t must be >= 0");
    if (profile.kind == ProfileKind::Fixed) return profile.v_initial;
    return t < profile.step_time ? profile.v_initial : profile.v_final;
}

}  // namespace boostctl
