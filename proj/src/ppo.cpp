#include "boostctl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "boostctl/parallel.hpp"
#include "json.hpp"

namespace boostctl {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2*pi)
constexpr double kLogStdFloor = -6.907755278982137;     // log(1e-3)
constexpr double kLogStdCeil = 0.0;                     // log(1)
}  // namespace

void PpoConfig::validate() const {
    if (episodes < 0) throw std::invalid_argument("ppo config: episodes must be >= 0");
    if (epochs < 1) throw std::invalid_argument("ppo config: epochs must be >= 1");
    if (lr_actor <= 0.0 || lr_critic <= 0.0)
        throw std::invalid_argument("ppo config: learning rates must be > 0");
    if (!(discount > 0.0 && discount <= 1.0))
        throw std::invalid_argument("ppo config: discount must lie in (0, 1]");
    if (!(gae_lambda > 0.0 && gae_lambda <= 1.0))
        throw std::invalid_argument("ppo config: gae_lambda must lie in (0, 1]");
    if (!(clip > 0.0 && clip < 1.0))
        throw std::invalid_argument("ppo config: clip must lie in (0, 1)");
    if (minibatch_size < 1) throw std::invalid_argument("ppo config: minibatch_size must be >= 1");
    if (hidden_layers < 1 || neurons < 1)
        throw std::invalid_argument("ppo config: network shape must be positive");
    if (grad_norm_clip <= 0.0) throw std::invalid_argument("ppo config: grad clip must be > 0");
}

std::array<double, 3> normalize_observation(const Observation& obs, double v_ref, double dt) {
    return {obs.v_out / v_ref, obs.error / v_ref, obs.error_rate * dt / v_ref};
}

void RolloutBuffer::clear() {
    transitions.clear();
    advantages.clear();
    returns.clear();
}

double GaussianPolicy::stddev() const {
    return std::clamp(std::exp(log_std), kStdFloor, kStdCeil);
}

namespace {
std::vector<int> network_shape(const PpoConfig& config) {
    std::vector<int> sizes;
    sizes.push_back(3);
    for (int l = 0; l < config.hidden_layers; ++l) sizes.push_back(config.neurons);
    sizes.push_back(1);
    return sizes;
}
}  // namespace

GaussianPolicy make_policy(const PpoConfig& config) {
    config.validate();
    GaussianPolicy policy;
    policy.actor = Mlp::init(network_shape(config), Activation::Tanh, Activation::Identity,
                             config.seed * 2 + 1);
    for (double& w : policy.actor.weights().back()) w *= config.init_output_scale;
    policy.actor.biases().back()[0] += config.init_action_bias;
    policy.log_std = std::clamp(config.init_log_std, kLogStdFloor, kLogStdCeil);
    return policy;
}

Mlp make_critic(const PpoConfig& config) {
    config.validate();
    return Mlp::init(network_shape(config), Activation::Tanh, Activation::Identity,
                     config.seed * 2 + 2);
}

double gaussian_log_prob(double action, double mean, double stddev) {
    const double z = (action - mean) / stddev;
    return -0.5 * z * z - std::log(stddev) - kHalfLog2Pi;
}

std::pair<double, double> policy_sample(const GaussianPolicy& policy,
                                        std::span<const double> obs, Rng& rng) {
    const double mean = policy.actor.forward(obs)[0];
    const double sd = policy.stddev();
    const double action = rng.normal(mean, sd);
    return {action, gaussian_log_prob(action, mean, sd)};
}

double prob_ratio(double new_log_prob, double old_log_prob) {
    if (!std::isfinite(new_log_prob) || !std::isfinite(old_log_prob))
        throw std::invalid_argument("prob_ratio: non-finite log-probability");
    return std::exp(std::clamp(new_log_prob - old_log_prob, -20.0, 20.0));
}

double clipped_surrogate(double ratio, double advantage, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("clipped_surrogate: bad eps");
    const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
    return std::min(ratio * advantage, clipped * advantage);
}

void normalize_advantages_inplace(std::vector<double>& advantages) {
    const std::size_t n = advantages.size();
    if (n < 2) return;
    double mean = 0.0;
    for (double a : advantages) mean += a;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double a : advantages) var += (a - mean) * (a - mean);
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var) + 1e-8;
    for (double& a : advantages) a = (a - mean) / sd;
}

std::pair<std::vector<double>, std::vector<double>> compute_gae(
    std::span<const double> rewards, std::span<const double> values, double bootstrap_value,
    double discount, double gae_lambda) {
    if (rewards.size() != values.size())
        throw std::invalid_argument("compute_gae: rewards/values length mismatch");
    const std::size_t n = rewards.size();
    std::vector<double> advantages(n), returns(n);
    double next_adv = 0.0;
    double next_value = bootstrap_value;
    for (std::size_t t = n; t-- > 0;) {
        const double delta = rewards[t] + discount * next_value - values[t];
        next_adv = delta + discount * gae_lambda * next_adv;
        advantages[t] = next_adv;
        returns[t] = next_adv + values[t];
        next_value = values[t];
    }
    return {std::move(advantages), std::move(returns)};
}

UpdateStats ppo_update(GaussianPolicy& policy, Mlp& critic, const RolloutBuffer& buffer,
                       const PpoConfig& config, Rng& rng) {
    config.validate();
    const std::size_t n = buffer.size();
    if (n == 0) throw std::invalid_argument("ppo_update: empty buffer");
    if (buffer.advantages.size() != n || buffer.returns.size() != n)
        throw std::invalid_argument("ppo_update: advantages not computed");

    std::vector<double> adv = buffer.advantages;
    if (config.normalize_advantages) normalize_advantages_inplace(adv);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    UpdateStats stats;
    double surr_sum = 0.0, critic_sum = 0.0, ratio_sum = 0.0;
    std::size_t sample_passes = 0, clip_count = 0;

    std::vector<double> mb_inputs;
    std::vector<std::size_t> mb_idx;
    std::vector<double> slot_surr, slot_ratio, slot_logstd_grad;
    std::vector<std::uint8_t> slot_clipped;
    BatchGradWorkspace actor_ws, critic_ws;

    double sd = policy.stddev();  // re-read per minibatch; log_std evolves

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates with the shared stream keeps runs reproducible.
        for (std::size_t i = n; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.index(i)]);

        for (std::size_t start = 0; start < n; start += config.minibatch_size) {
            const std::size_t m = std::min<std::size_t>(config.minibatch_size, n - start);
            sd = policy.stddev();
            mb_idx.assign(perm.begin() + start, perm.begin() + start + m);
            mb_inputs.resize(m * 3);
            for (std::size_t i = 0; i < m; ++i) {
                const auto& o = buffer.transitions[mb_idx[i]].obs;
                std::copy(o.begin(), o.end(), mb_inputs.begin() + i * 3);
            }

            // Actor: descend -(1/m) sum of clipped surrogates.
            slot_surr.assign(m, 0.0);
            slot_ratio.assign(m, 0.0);
            slot_logstd_grad.assign(m, 0.0);
            slot_clipped.assign(m, 0);
            const double inv_m = 1.0 / static_cast<double>(m);
            const auto actor_fn = [&](std::size_t i, std::span<const double> out,
                                      std::span<double> out_grad) {
                const Transition& tr = buffer.transitions[mb_idx[i]];
                const double advantage = adv[mb_idx[i]];
                const double mean = out[0];
                const double lp_new = gaussian_log_prob(tr.action, mean, sd);
                const double ratio = prob_ratio(lp_new, tr.log_prob);
                const double unclipped = ratio * advantage;
                const double clipped =
                    std::clamp(ratio, 1.0 - config.clip, 1.0 + config.clip) * advantage;
                const bool use_unclipped = unclipped <= clipped;
                const double z = (tr.action - mean) / sd;
                if (use_unclipped) {
                    // d lp / d mean = z / sd,  d lp / d log_std = z^2 - 1
                    out_grad[0] = -inv_m * unclipped * (z / sd);
                    slot_logstd_grad[i] = -inv_m * unclipped * (z * z - 1.0);
                }
                slot_surr[i] = std::min(unclipped, clipped);
                slot_ratio[i] = ratio;
                slot_clipped[i] = (ratio < 1.0 - config.clip || ratio > 1.0 + config.clip);
                return 0.0;
            };
            // Critic: descend (1/m) sum (return - V)^2.
            const auto critic_fn = [&](std::size_t i, std::span<const double> out,
                                       std::span<double> out_grad) {
                const double target = buffer.returns[mb_idx[i]];
                const double err = out[0] - target;
                out_grad[0] = 2.0 * inv_m * err;
                return err * err;
            };

            // The two networks are independent; their gradient passes and
            // updates run concurrently, each serial inside. Results do not
            // depend on the thread count.
            double critic_stat = 0.0;
            bool actor_bad = false, critic_bad = false;
#pragma omp parallel sections
            {
#pragma omp section
                {
                    batch_gradient_serial(policy.actor, mb_inputs, m, actor_fn, m, actor_ws);
                    double logstd_grad = 0.0;
                    for (std::size_t i = 0; i < m; ++i) logstd_grad += slot_logstd_grad[i];
                    const double actor_norm =
                        std::sqrt(actor_ws.grads.squared_norm() + logstd_grad * logstd_grad);
                    if (!std::isfinite(actor_norm)) {
                        actor_bad = true;
                    } else {
                        if (actor_norm > config.grad_norm_clip) {
                            const double scale = config.grad_norm_clip / actor_norm;
                            actor_ws.grads.scale(scale);
                            logstd_grad *= scale;
                        }
                        policy.actor.apply_update(actor_ws.grads, config.lr_actor);
                        policy.log_std =
                            std::clamp(policy.log_std - config.lr_actor * logstd_grad,
                                       kLogStdFloor, kLogStdCeil);
                    }
                }
#pragma omp section
                {
                    critic_stat =
                        batch_gradient_serial(critic, mb_inputs, m, critic_fn, m, critic_ws);
                    const double critic_norm = std::sqrt(critic_ws.grads.squared_norm());
                    if (!std::isfinite(critic_norm) || !std::isfinite(critic_stat)) {
                        critic_bad = true;
                    } else {
                        if (critic_norm > config.grad_norm_clip)
                            critic_ws.grads.scale(config.grad_norm_clip / critic_norm);
                        critic.apply_update(critic_ws.grads, config.lr_critic);
                    }
                }
            }

            for (std::size_t i = 0; i < m; ++i) {
                surr_sum += slot_surr[i];
                ratio_sum += slot_ratio[i];
                clip_count += slot_clipped[i];
            }
            sample_passes += m;
            critic_sum += critic_stat;

            if (actor_bad || critic_bad) {
                std::ostringstream msg;
                msg << "ppo_update: non-finite " << (actor_bad ? "actor" : "critic")
                    << " gradient (actor loss so far "
                    << -surr_sum / static_cast<double>(sample_passes) << ", critic loss sum "
                    << critic_stat << ")";
                throw std::runtime_error(msg.str());
            }
        }
    }

    stats.actor_loss = -surr_sum / static_cast<double>(sample_passes);
    stats.critic_loss = critic_sum / static_cast<double>(sample_passes);
    stats.mean_ratio = ratio_sum / static_cast<double>(sample_passes);
    stats.clip_fraction = static_cast<double>(clip_count) / static_cast<double>(sample_passes);
    return stats;
}

TrainResult train(const std::function<BoostEnv()>& env_factory, const PpoConfig& config) {
    config.validate();
    TrainResult result;
    result.policy = make_policy(config);
    result.critic = make_critic(config);

    Rng master(config.seed);
    Rng sample_rng(master.next_u64());
    Rng update_rng(master.next_u64());

    RolloutBuffer buffer;
    for (int ep = 0; ep < config.episodes; ++ep) {
        BoostEnv env = env_factory();
        Observation obs = env.reset(config.seed + static_cast<std::uint64_t>(ep));
        const double v_ref = env.spec().v_ref;
        const double dt = env.params().dt;

        buffer.clear();
        double episode_reward = 0.0;
        std::array<double, 3> nobs = normalize_observation(obs, v_ref, dt);
        bool done = false;
        while (!done) {
            const auto [action, log_prob] = policy_sample(result.policy, nobs, sample_rng);
            const double value = result.critic.forward(nobs)[0];
            const auto sr = env.step(action);
            buffer.transitions.push_back(
                Transition{nobs, action, log_prob, sr.reward, value, sr.done});
            episode_reward += sr.reward;
            nobs = normalize_observation(sr.obs, v_ref, dt);
            done = sr.done;
        }

        const double bootstrap =
            env.terminated() ? 0.0 : result.critic.forward(nobs)[0];
        std::vector<double> rewards(buffer.size()), values(buffer.size());
        for (std::size_t i = 0; i < buffer.size(); ++i) {
            rewards[i] = buffer.transitions[i].reward;
            values[i] = buffer.transitions[i].value;
        }
        auto [advantages, returns] =
            compute_gae(rewards, values, bootstrap, config.discount, config.gae_lambda);
        buffer.advantages = std::move(advantages);
        buffer.returns = std::move(returns);

        result.update_stats.push_back(
            ppo_update(result.policy, result.critic, buffer, config, update_rng));
        result.reward_curve.push_back(episode_reward);
    }
    return result;
}

namespace {

nlohmann::json config_to_json(const PpoConfig& c) {
    nlohmann::json j;
    j["episodes"] = c.episodes;
    j["epochs"] = c.epochs;
    j["lr_actor"] = c.lr_actor;
    j["lr_critic"] = c.lr_critic;
    j["discount"] = c.discount;
    j["clip"] = c.clip;
    j["gae_lambda"] = c.gae_lambda;
    j["minibatch_size"] = c.minibatch_size;
    j["hidden_layers"] = c.hidden_layers;
    j["neurons"] = c.neurons;
    j["init_log_std"] = c.init_log_std;
    j["init_action_bias"] = c.init_action_bias;
    j["init_output_scale"] = c.init_output_scale;
    j["normalize_advantages"] = c.normalize_advantages;
    j["grad_norm_clip"] = c.grad_norm_clip;
    j["seed"] = c.seed;
    return j;
}

PpoConfig config_from_json(const nlohmann::json& j) {
    PpoConfig c;
    c.episodes = j.at("episodes").get<int>();
    c.epochs = j.at("epochs").get<int>();
    c.lr_actor = j.at("lr_actor").get<double>();
    c.lr_critic = j.at("lr_critic").get<double>();
    c.discount = j.at("discount").get<double>();
    c.clip = j.at("clip").get<double>();
    c.gae_lambda = j.at("gae_lambda").get<double>();
    c.minibatch_size = j.at("minibatch_size").get<int>();
    c.hidden_layers = j.at("hidden_layers").get<int>();
    c.neurons = j.at("neurons").get<int>();
    c.init_log_std = j.at("init_log_std").get<double>();
    c.init_action_bias = j.at("init_action_bias").get<double>();
    c.init_output_scale = j.at("init_output_scale").get<double>();
    c.normalize_advantages = j.at("normalize_advantages").get<bool>();
    c.grad_norm_clip = j.at("grad_norm_clip").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

}  // namespace

void save_ppo(const std::string& prefix, const TrainResult& result, const PpoConfig& config) {
    result.policy.actor.save(prefix + "actor.json");
    result.critic.save(prefix + "critic.json");
    nlohmann::json j;
    j["config"] = config_to_json(config);
    j["log_std"] = result.policy.log_std;
    j["reward_curve"] = result.reward_curve;
    std::ofstream out(prefix + "ppo.json");
    if (!out) throw std::runtime_error("cannot open for writing: " + prefix + "ppo.json");
    out << j.dump(2) << '\n';
}

PpoCheckpoint load_ppo(const std::string& prefix) {
    std::ifstream in(prefix + "ppo.json");
    if (!in) throw std::runtime_error("cannot open for reading: " + prefix + "ppo.json");
    nlohmann::json j;
    in >> j;

    PpoCheckpoint ck;
    ck.config = config_from_json(j.at("config"));
    ck.policy.actor = Mlp::load(prefix + "actor.json");
    ck.policy.log_std = j.at("log_std").get<double>();
    ck.critic = Mlp::load(prefix + "critic.json");
    ck.reward_curve = j.at("reward_curve").get<std::vector<double>>();
    return ck;
}

}  // namespace boostctl
