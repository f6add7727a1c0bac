#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "boostctl/env.hpp"
#include "boostctl/mlp.hpp"
#include "boostctl/rng.hpp"

namespace boostctl {

inline constexpr double kStdFloor = 1e-3;
inline constexpr double kStdCeil = 1.0;

struct PpoConfig {
    int episodes = 50;
    int epochs = 5;
    double lr_actor = 0.05;
    double lr_critic = 0.05;
    double discount = 0.99;
    double clip = 0.2;
    double gae_lambda = 0.98;
    int minibatch_size = 8;
    int hidden_layers = 3;
    int neurons = 256;
    double init_log_std = -2.302585092994046;  // std 0.1
    // Added to the actor's output bias after init. Centres the initial mean
    // on a duty whose start-up transient survives the limit mechanism; a
    // zero-centred mean starts below the duty floor where exploration is
    // inconsequential.
    double init_action_bias = 0.1;
    // The actor's output-layer weights are scaled by this factor after init,
    // the usual small policy-head init: the starting policy is then nearly
    // state-independent and its mean moves only as the surrogate demands.
    double init_output_scale = 0.01;
    bool normalize_advantages = true;
    double grad_norm_clip = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

// Networks see scaled signals; raw volts saturate wide tanh layers. The scale
// is part of the policy contract and is reused by the evaluation harness.
std::array<double, 3> normalize_observation(const Observation& obs, double v_ref, double dt);

struct Transition {
    std::array<double, 3> obs{};  // normalized observation the action was taken from
    double action = 0.0;          // pre-clamp duty
    double log_prob = 0.0;        // under the behaviour (snapshot) policy
    double reward = 0.0;
    double value = 0.0;           // V(s) under the critic at collection time
    bool done = false;
};

struct RolloutBuffer {
    std::vector<Transition> transitions;
    std::vector<double> advantages;
    std::vector<double> returns;

    std::size_t size() const { return transitions.size(); }
    void clear();
};

// Gaussian policy over the duty command: the actor outputs the mean, the
// standard deviation is one learned scalar shared across states.
struct GaussianPolicy {
    Mlp actor;
    double log_std = 0.0;

    double stddev() const;
    double mean_action(std::span<const double> obs) const { return actor.forward(obs)[0]; }
};

GaussianPolicy make_policy(const PpoConfig& config);
Mlp make_critic(const PpoConfig& config);

double gaussian_log_prob(double action, double mean, double stddev);

std::pair<double, double> policy_sample(const GaussianPolicy& policy,
                                        std::span<const double> obs, Rng& rng);

// exp(new - old), exponent clamped to +-20.
double prob_ratio(double new_log_prob, double old_log_prob);

// min(ratio * A, clip(ratio, 1-eps, 1+eps) * A) for one sample.
double clipped_surrogate(double ratio, double advantage, double eps);

// Rescale to zero mean and unit variance (no-op on fewer than two samples).
void normalize_advantages_inplace(std::vector<double>& advantages);

// Generalized advantage estimation over one episode segment. A terminated
// episode passes bootstrap_value = 0; a horizon-truncated one passes the
// critic's value of the final observation. returns[t] = advantages[t] + V(s_t)
// is the critic's regression target.
std::pair<std::vector<double>, std::vector<double>> compute_gae(
    std::span<const double> rewards, std::span<const double> values, double bootstrap_value,
    double discount, double gae_lambda);

struct UpdateStats {
    double actor_loss = 0.0;
    double critic_loss = 0.0;
    double mean_ratio = 0.0;
    double clip_fraction = 0.0;
};

// One PPO update round: K epochs of shuffled minibatches. The critic descends
// squared error to the returns; the actor descends the negated clipped
// surrogate. Each minibatch gradient is norm-clipped before the plain
// gradient-descent step.
UpdateStats ppo_update(GaussianPolicy& policy, Mlp& critic, const RolloutBuffer& buffer,
                       const PpoConfig& config, Rng& rng);

struct TrainResult {
    GaussianPolicy policy;
    Mlp critic;
    std::vector<double> reward_curve;  // summed reward per episode
    std::vector<UpdateStats> update_stats;
};

// Alternates collection of one full episode (to horizon or limit termination)
// with a ppo_update round; the stored log-probs are the theta_old snapshot.
TrainResult train(const std::function<BoostEnv()>& env_factory, const PpoConfig& config);

// Checkpoint trio: <prefix>actor.json, <prefix>critic.json and a
// <prefix>ppo.json header with the config, log_std and reward curve.
void save_ppo(const std::string& prefix, const TrainResult& result, const PpoConfig& config);
struct PpoCheckpoint {
    GaussianPolicy policy;
    Mlp critic;
    PpoConfig config;
    std::vector<double> reward_curve;
};
PpoCheckpoint load_ppo(const std::string& prefix);

}  // namespace boostctl
