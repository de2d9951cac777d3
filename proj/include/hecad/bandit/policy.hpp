#pragma once

#include <array>
#include <random>
#include <stdexcept>

#include "hecad/nn/mlp.hpp"
#include "hecad/nn/rng.hpp"
#include "hecad/tier.hpp"

namespace hecad::bandit {

inline constexpr std::size_t kNumActions = kNumTiers;

// One-hot choice of the layer that runs detection.
struct Action {
    std::array<bool, kNumActions> one_hot{};
    std::size_t index = 0;

    static Action from_index(std::size_t k) {
        if (k >= kNumActions) throw std::invalid_argument("Action: index out of range");
        Action a;
        a.index = k;
        a.one_hot[k] = true;
        return a;
    }

    Tier tier() const { return static_cast<Tier>(static_cast<int>(index)); }
};

// Single-hidden-layer softmax network over the K layers: tanh hidden, linear
// head, softmax output.
struct PolicyNetwork {
    nn::Mlp net;
    std::size_t input_dim = 0;
    std::size_t hidden_units = 0;

    std::size_t parameter_count() const { return net.parameter_count(); }
};

inline PolicyNetwork make_policy(std::size_t input_dim, std::size_t hidden_units,
                                 nn::RngSeed seed) {
    if (input_dim == 0 || hidden_units == 0)
        throw std::invalid_argument("make_policy: input_dim and hidden_units must be > 0");
    PolicyNetwork p;
    p.input_dim = input_dim;
    p.hidden_units = hidden_units;
    {
        auto rng = nn::make_rng(seed, 100);
        p.net.layers.push_back(
            nn::make_dense_layer(input_dim, hidden_units, nn::Activation::kTanh, rng));
    }
    {
        auto rng = nn::make_rng(seed, 101);
        p.net.layers.push_back(
            nn::make_dense_layer(hidden_units, kNumActions, nn::Activation::kSoftmax, rng));
    }
    return p;
}

// Likelihood vector s over the K actions; entries in (0,1), sum 1.
inline nn::Vec policy_forward(const PolicyNetwork& policy, const nn::Vec& state) {
    nn::require_dim(policy.input_dim, state.size(), "policy_forward: state");
    return nn::mlp_forward(policy.net, state);
}

// argmax with ties broken toward the lowest index.
inline Action greedy_action(const nn::Vec& s) {
    if (s.size() != kNumActions) throw std::invalid_argument("greedy_action: bad likelihood size");
    std::size_t best = 0;
    for (std::size_t k = 1; k < s.size(); ++k)
        if (s[k] > s[best]) best = k;
    return Action::from_index(best);
}

// Decayed-epsilon-greedy: explore uniformly over all K with probability
// epsilon, otherwise act greedily.
inline Action select_action(const nn::Vec& s, double epsilon, std::mt19937_64& rng) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("select_action: epsilon must be in [0,1]");
    if (epsilon > 0.0) {
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        if (coin(rng) < epsilon) {
            std::uniform_int_distribution<std::size_t> pick(0, kNumActions - 1);
            return Action::from_index(pick(rng));
        }
    }
    return greedy_action(s);
}

}  // namespace hecad::bandit
