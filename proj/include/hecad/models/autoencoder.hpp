#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hecad/nn/mlp.hpp"
#include "hecad/nn/rng.hpp"

namespace hecad::models {

// Symmetric dense autoencoder: tanh hidden layers, linear output, first and
// last size equal. Presets follow the 30% bottleneck family — each step up
// the hierarchy adds one encoder and one decoder layer.
struct AeArchitecture {
    std::vector<std::size_t> layer_sizes;

    static AeArchitecture iot() { return {{672, 201, 672}}; }
    static AeArchitecture edge() { return {{672, 336, 201, 336, 672}}; }
    static AeArchitecture cloud() { return {{672, 470, 336, 201, 336, 470, 672}}; }

    void validate() const {
        if (layer_sizes.size() < 3)
            throw std::invalid_argument("AeArchitecture: need at least input, hidden, output");
        if (layer_sizes.size() % 2 == 0)
            throw std::invalid_argument("AeArchitecture: stack must have an odd number of sizes");
        for (std::size_t s : layer_sizes)
            if (s == 0) throw std::invalid_argument("AeArchitecture: zero-size layer");
        const std::size_t n = layer_sizes.size();
        for (std::size_t i = 0; i < n / 2; ++i)
            if (layer_sizes[i] != layer_sizes[n - 1 - i])
                throw std::invalid_argument("AeArchitecture: encoder/decoder sizes must mirror");
    }

    std::size_t input_dim() const { return layer_sizes.front(); }

    // sum_i (n_i * n_{i+1} + n_{i+1})
    std::size_t parameter_count() const {
        std::size_t total = 0;
        for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i)
            total += layer_sizes[i] * layer_sizes[i + 1] + layer_sizes[i + 1];
        return total;
    }

    // Index of the dense layer whose output is the bottleneck code.
    std::size_t bottleneck_layer() const { return (layer_sizes.size() - 1) / 2 - 1; }
    std::size_t bottleneck_dim() const { return layer_sizes[(layer_sizes.size() - 1) / 2]; }
};

struct AutoencoderModel {
    AeArchitecture arch;
    nn::Mlp net;
};

inline AutoencoderModel make_autoencoder(const AeArchitecture& arch, nn::RngSeed seed) {
    arch.validate();
    AutoencoderModel model;
    model.arch = arch;
    for (std::size_t i = 0; i + 1 < arch.layer_sizes.size(); ++i) {
        const bool is_output = (i + 2 == arch.layer_sizes.size());
        auto rng = nn::make_rng(seed, i);
        model.net.layers.push_back(nn::make_dense_layer(
            arch.layer_sizes[i], arch.layer_sizes[i + 1],
            is_output ? nn::Activation::kLinear : nn::Activation::kTanh, rng));
    }
    return model;
}

}  // namespace hecad::models
