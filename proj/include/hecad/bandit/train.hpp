#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numeric>
#include <ostream>
#include <random>
#include <vector>

#include "hecad/bandit/env.hpp"
#include "hecad/bandit/policy.hpp"
#include "hecad/bandit/reward.hpp"
#include "hecad/nn/rng.hpp"

namespace hecad::bandit {

// Inputs of the policy-training loop. `batch_n` is the mini-batch size N
// (0 = the whole training set as one batch per episode). The learning rate is
// deliberately a separate field from `cost_alpha`: the delay-cost tradeoff
// and the step size are different knobs even where notation overloads them.
struct TrainLoopConfig {
    std::size_t n_epochs = 0;
    std::size_t batch_n = 0;
    double learning_rate = 0.01;
    double l2_gamma = 1e-4;
    double cost_alpha = 0.0005;
    std::size_t explore_steps_a = 0;  // A: episodes over which epsilon decays
    double p_init = 0.5;
    double p_end = 0.0;
    nn::RngSeed seed;

    void validate() const {
        if (p_init < 0.0 || p_init > 1.0 || p_end < 0.0 || p_end > 1.0)
            throw std::invalid_argument("TrainLoopConfig: p_init and p_end must be in [0,1]");
        if (explore_steps_a > n_epochs)
            throw std::invalid_argument("TrainLoopConfig: explore_steps_a must be <= n_epochs");
        if (learning_rate < 0.0) throw std::invalid_argument("TrainLoopConfig: negative learning rate");
    }
};

// epsilon(n_e) = (p_i - p_e) * max((A - n_e)/A, 0) + p_e. With A = 0 the
// schedule is the constant p_e.
inline double epsilon_at(const TrainLoopConfig& cfg, std::size_t episode) {
    if (cfg.explore_steps_a == 0) return cfg.p_end;
    const double a = static_cast<double>(cfg.explore_steps_a);
    const double r = std::max((a - static_cast<double>(episode)) / a, 0.0);
    return (cfg.p_init - cfg.p_end) * r + cfg.p_end;
}

struct BatchSample {
    const nn::Vec* state = nullptr;
    Action action;
    double reward = 0.0;
    double baseline = 0.0;
};

// Mini-batch REINFORCE gradient with baseline:
//   grad = -(1/N) sum_i (R_i - B_i) grad_theta log s_{a_i}(z_i) + gamma * theta
// computed as backprop of the advantage-weighted negative log-likelihood of
// the chosen actions. The chosen likelihood is floored at 1e-12 inside the
// log. Returns the scalar surrogate loss through `loss_out`.
inline nn::MlpGrads reinforce_gradient(const PolicyNetwork& policy,
                                       const std::vector<BatchSample>& batch, double l2_gamma,
                                       double* loss_out = nullptr) {
    if (batch.empty()) throw std::invalid_argument("reinforce_gradient: empty batch");
    const double n = static_cast<double>(batch.size());
    nn::MlpGrads grads;
    grads.init_like(policy.net);

    double loss = 0.0;
    nn::MlpForwardCache cache;
    for (const auto& sample : batch) {
        const nn::Vec s = nn::mlp_forward_cached(policy.net, *sample.state, cache);
        const double advantage = sample.reward - sample.baseline;
        loss += -advantage * std::log(std::max(s[sample.action.index], 1e-12)) / n;

        nn::Vec d_logits(kNumActions);
        for (std::size_t k = 0; k < kNumActions; ++k) {
            const double onehot = sample.action.one_hot[k] ? 1.0 : 0.0;
            d_logits[k] = advantage * (s[k] - onehot) / n;
        }
        nn::mlp_backward(policy.net, cache, d_logits, /*top_is_preactivation=*/true, grads);
    }

    if (l2_gamma > 0.0) {
        double sq = 0.0;
        for (std::size_t li = 0; li < policy.net.layers.size(); ++li) {
            const auto& layer = policy.net.layers[li];
            for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
                grads.dw[li].data[i] += l2_gamma * layer.weights.data[i];
                sq += layer.weights.data[i] * layer.weights.data[i];
            }
            for (std::size_t i = 0; i < layer.biases.size(); ++i) {
                grads.db[li][i] += l2_gamma * layer.biases[i];
                sq += layer.biases[i] * layer.biases[i];
            }
        }
        loss += 0.5 * l2_gamma * sq;
    }
    if (loss_out) *loss_out = loss;
    return grads;
}

inline void apply_sgd(PolicyNetwork& policy, const nn::MlpGrads& grads, double learning_rate) {
    for (std::size_t li = 0; li < policy.net.layers.size(); ++li) {
        auto& layer = policy.net.layers[li];
        for (std::size_t i = 0; i < layer.weights.data.size(); ++i)
            layer.weights.data[i] -= learning_rate * grads.dw[li].data[i];
        for (std::size_t i = 0; i < layer.biases.size(); ++i)
            layer.biases[i] -= learning_rate * grads.db[li][i];
    }
}

struct EpisodeLog {
    std::size_t episode = 0;
    double epsilon = 0.0;
    double mean_reward = 0.0;
    double best_baseline = 0.0;
    double loss = 0.0;
    double wall_ms = 0.0;
};

struct TrainResult {
    PolicyNetwork policy;
    std::vector<EpisodeLog> log;
};

inline void write_training_log_csv(std::ostream& out, const std::vector<EpisodeLog>& log) {
    out << "episode,epsilon,mean_reward,best_baseline,loss,wall_ms\n";
    for (const auto& e : log)
        out << e.episode << ',' << e.epsilon << ',' << e.mean_reward << ',' << e.best_baseline
            << ',' << e.loss << ',' << e.wall_ms << '\n';
}

namespace detail {

// Shared episode loop. The two trainers differ only in how a mini-batch's
// outcomes are gathered:
//   sequential  one env.query per sample, per-dispatch delays
//   grouped     samples grouped by selected action, one env.query_group per
//               group (groups issued concurrently), delays taken from the
//               fixed per-tier table
// Action selection consumes the RNG in canonical batch order in both modes,
// and rewards/gradients are accumulated in canonical order after all groups
// return, so a fixed-delay environment yields identical parameters.
inline TrainResult run_training(Env& env, PolicyNetwork policy, const TrainLoopConfig& cfg,
                                bool grouped, const std::array<double, kNumTiers>* fixed_delay_ms) {
    cfg.validate();
    if (env.size() == 0) throw std::invalid_argument("train_policy: empty environment");

    TrainResult result;
    auto rng = nn::make_rng(cfg.seed, 0xba7d17);
    BaselineTracker tracker;

    std::vector<std::size_t> order(env.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t batch_size =
        cfg.batch_n == 0 ? env.size() : std::min<std::size_t>(cfg.batch_n, env.size());

    for (std::size_t episode = 0; episode < cfg.n_epochs; ++episode) {
        const auto t0 = std::chrono::steady_clock::now();
        std::shuffle(order.begin(), order.end(), rng);
        const double eps = epsilon_at(cfg, episode);

        double reward_sum = 0.0;
        double loss_sum = 0.0;
        std::size_t n_batches = 0;

        for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
            const std::size_t end = std::min(begin + batch_size, order.size());
            const std::size_t n = end - begin;

            std::vector<Action> actions(n);
            for (std::size_t j = 0; j < n; ++j) {
                const nn::Vec s = policy_forward(policy, env.state(order[begin + j]).vector);
                actions[j] = select_action(s, eps, rng);
            }

            std::vector<Outcome> outcomes(n);
            if (!grouped) {
                for (std::size_t j = 0; j < n; ++j)
                    outcomes[j] = env.query(order[begin + j], actions[j].tier());
            } else {
                std::array<std::vector<std::size_t>, kNumTiers> group_pos;
                std::array<std::vector<std::size_t>, kNumTiers> group_idx;
                for (std::size_t j = 0; j < n; ++j) {
                    group_pos[actions[j].index].push_back(j);
                    group_idx[actions[j].index].push_back(order[begin + j]);
                }
                std::array<std::future<std::vector<Outcome>>, kNumTiers> futures;
                for (std::size_t k = 0; k < kNumTiers; ++k) {
                    if (group_idx[k].empty()) continue;
                    futures[k] = std::async(std::launch::async, [&env, k, &group_idx] {
                        return env.query_group(static_cast<Tier>(static_cast<int>(k)),
                                               group_idx[k]);
                    });
                }
                for (std::size_t k = 0; k < kNumTiers; ++k) {
                    if (group_idx[k].empty()) continue;
                    const std::vector<Outcome> outs = futures[k].get();
                    for (std::size_t g = 0; g < outs.size(); ++g) {
                        Outcome o = outs[g];
                        o.t_e2e_ms = (*fixed_delay_ms)[k];
                        outcomes[group_pos[k][g]] = o;
                    }
                }
            }

            // Baseline defaults to 0 until a reward has been observed.
            const double baseline =
                std::isfinite(tracker.best_reward) ? tracker.best_reward : 0.0;
            std::vector<BatchSample> batch(n);
            std::vector<double> rewards(n);
            for (std::size_t j = 0; j < n; ++j) {
                const double c = cost(outcomes[j].t_e2e_ms, cfg.cost_alpha);
                rewards[j] = reward(outcomes[j].accuracy, c);
                batch[j] = {&env.state(order[begin + j]).vector, actions[j], rewards[j], baseline};
                reward_sum += rewards[j];
            }

            double loss = 0.0;
            const nn::MlpGrads grads = reinforce_gradient(policy, batch, cfg.l2_gamma, &loss);
            apply_sgd(policy, grads, cfg.learning_rate);
            tracker.update(rewards);
            loss_sum += loss;
            ++n_batches;
        }

        const auto t1 = std::chrono::steady_clock::now();
        EpisodeLog entry;
        entry.episode = episode;
        entry.epsilon = eps;
        entry.mean_reward = reward_sum / static_cast<double>(order.size());
        entry.best_baseline = tracker.best_reward;
        entry.loss = loss_sum / static_cast<double>(n_batches);
        entry.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        result.log.push_back(entry);
    }

    result.policy = std::move(policy);
    return result;
}

}  // namespace detail

// Algorithm-faithful training loop: per episode, a seeded shuffle, a decayed
// epsilon, per-sample environment queries, one gradient step per mini-batch,
// and a best-observed-reward baseline update.
inline TrainResult train_policy_sequential(Env& env, PolicyNetwork policy,
                                           const TrainLoopConfig& cfg) {
    return detail::run_training(env, std::move(policy), cfg, false, nullptr);
}

// Accelerated variant: per mini-batch, samples are grouped by selected action
// and each group is queried in one batched round trip (groups run
// concurrently). Rewards use the fixed per-tier delay table instead of
// per-dispatch delays. With a fixed-delay environment and a matching table it
// reproduces the sequential trainer's parameters exactly.
inline TrainResult train_policy_parallel(Env& env, PolicyNetwork policy,
                                         const TrainLoopConfig& cfg,
                                         const std::array<double, kNumTiers>& fixed_delay_ms) {
    return detail::run_training(env, std::move(policy), cfg, true, &fixed_delay_ms);
}

}  // namespace hecad::bandit
