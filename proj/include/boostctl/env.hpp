#pragma once

#include <cstdint>

#include "boostctl/converter.hpp"

namespace boostctl {

// Reward cap for r = 1/|e|; reached at |e| = 1 mV.
inline constexpr double kRewardCap = 1000.0;

// One regulation episode: reference, termination limits and horizon.
// e_th is declared by the reward procedure's preamble but never used by its
// body; it is stored and exposed, nothing reads it.
struct EpisodeSpec {
    double v_ref = 48.0;
    double v_up = 57.6;
    double v_low = 38.4;
    double e_th = 0.0;
    int horizon_steps = 5000;
    InputProfile input_profile = InputProfile::fixed(24.0);

    void validate() const;

    // v_up/v_low default to +-20% of v_ref unless overridden.
    static EpisodeSpec regulation(double v_ref, InputProfile profile, int horizon_steps = 5000);
};

// What the agent sees: output voltage, error and discrete error rate.
struct Observation {
    double v_out = 0.0;      // V
    double error = 0.0;      // V, v_ref - v_out
    double error_rate = 0.0; // V/s, (e_t - e_{t-1}) / dt; 0 at t = 0
};

// Latches once v_out has reached v_ref; only then does the lower limit
// terminate. Monotone within an episode, cleared on reset.
struct RewardFlagState {
    bool flag = false;
};

struct RewardResult {
    double reward = 0.0;
    bool flag = false;
    bool terminate = false;
};

// Per-step reward: -1 and terminate when v_out breaches the upper limit, or
// drops to the lower limit after the reference was reached; otherwise
// min(1/|e|, cap).
RewardResult reward_step(double v_out, double v_ref, double v_up, double v_low, bool flag);

// The RL-facing plant. One instance is single-threaded; run independent
// instances for parallel evaluation.
class BoostEnv {
public:
    struct StepResult {
        Observation obs;
        double reward = 0.0;
        bool done = false;
    };

    // termination_enabled=false runs every episode to the horizon; evaluation
    // uses this since the limit mechanism is a training device.
    BoostEnv(ConverterParams params, EpisodeSpec spec, bool termination_enabled = true);

    Observation reset(std::uint64_t seed = 0);
    StepResult step(double action_duty);

    const ConverterState& state() const { return state_; }
    const ConverterParams& params() const { return params_; }
    const EpisodeSpec& spec() const { return spec_; }
    double time() const { return steps_ * params_.dt; }
    int steps() const { return steps_; }
    bool done() const { return done_; }
    bool flag() const { return flag_.flag; }
    bool terminated() const { return terminated_; }
    // Haven't stepped yet / duty applied on the most recent step.
    double last_duty() const { return last_duty_; }

private:
    ConverterParams params_;
    EpisodeSpec spec_;
    bool termination_enabled_;

    ConverterState state_;
    RewardFlagState flag_;
    int steps_ = 0;
    bool done_ = true;
    bool terminated_ = false;
    double prev_error_ = 0.0;
    double last_duty_ = 0.0;
};

}  // namespace boostctl
