#include "boostctl/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boostctl {

void EpisodeSpec::validate() const {
    if (!(v_low < v_ref && v_ref < v_up))
        throw std::invalid_argument("episode spec: need v_low < v_ref < v_up");
    if (horizon_steps < 1) throw std::invalid_argument("episode spec: horizon_steps must be >= 1");
    input_profile.validate();
}

EpisodeSpec EpisodeSpec::regulation(double v_ref, InputProfile profile, int horizon_steps) {
    EpisodeSpec spec;
    spec.v_ref = v_ref;
    spec.v_up = 1.2 * v_ref;
    spec.v_low = 0.8 * v_ref;
    spec.horizon_steps = horizon_steps;
    spec.input_profile = profile;
    spec.validate();
    return spec;
}

RewardResult reward_step(double v_out, double v_ref, double v_up, double v_low, bool flag) {
    RewardResult r;
    r.flag = flag || (v_out >= v_ref);
    if (v_out >= v_up || (v_out <= v_low && r.flag)) {
        r.reward = -1.0;
        r.terminate = true;
        return r;
    }
    const double abs_e = std::abs(v_ref - v_out);
    r.reward = abs_e > 0.0 ? std::min(1.0 / abs_e, kRewardCap) : kRewardCap;
    return r;
}

BoostEnv::BoostEnv(ConverterParams params, EpisodeSpec spec, bool termination_enabled)
    : params_(params), spec_(spec), termination_enabled_(termination_enabled) {
    params_.validate();
    spec_.validate();
    if (spec_.input_profile.kind == ProfileKind::Step &&
        spec_.input_profile.step_time > spec_.horizon_steps * params_.dt)
        throw std::invalid_argument("env: step_time lies beyond the episode horizon");
}

Observation BoostEnv::reset(std::uint64_t /*seed*/) {
    state_ = ConverterState{0.0, 0.0};
    flag_ = RewardFlagState{};
    steps_ = 0;
    done_ = false;
    terminated_ = false;
    prev_error_ = spec_.v_ref;  // e at t=0
    last_duty_ = 0.0;
    return Observation{0.0, spec_.v_ref, 0.0};
}

BoostEnv::StepResult BoostEnv::step(double action_duty) {
    if (done_) throw std::logic_error("env step: episode is done; call reset()");

    const double duty = std::clamp(action_duty, params_.duty_min, params_.duty_max);
    const double t = steps_ * params_.dt;
    const double v_in = input_profile_at(spec_.input_profile, t);

    state_ = integrate_step(params_, state_, duty, v_in, params_.dt);
    last_duty_ = duty;
    ++steps_;

    const double error = spec_.v_ref - state_.v_c;
    Observation obs{state_.v_c, error, (error - prev_error_) / params_.dt};
    prev_error_ = error;

    const RewardResult rr = reward_step(state_.v_c, spec_.v_ref, spec_.v_up, spec_.v_low,
                                        flag_.flag);
    flag_.flag = rr.flag;

    terminated_ = termination_enabled_ && rr.terminate;
    done_ = terminated_ || steps_ >= spec_.horizon_steps;
    return StepResult{obs, rr.reward, done_};
}

}  // namespace boostctl
