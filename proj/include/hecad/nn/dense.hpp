#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "hecad/nn/rng.hpp"
#include "hecad/nn/tensor.hpp"

namespace hecad::nn {

enum class Activation { kLinear, kTanh, kSoftmax };

struct DenseLayer {
    Tensor2 weights;  // out x in
    Vec biases;       // out
    Activation activation = Activation::kLinear;

    std::size_t input_dim() const { return weights.cols; }
    std::size_t output_dim() const { return weights.rows; }
    std::size_t parameter_count() const { return weights.size() + biases.size(); }
};

// Numerically stable softmax; shifting all logits by a constant leaves the
// output unchanged up to rounding.
inline Vec softmax(const Vec& logits) {
    Vec out(logits.size());
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : logits) mx = std::max(mx, v);
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - mx);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

inline void apply_activation(Activation act, Vec& v) {
    switch (act) {
        case Activation::kLinear:
            break;
        case Activation::kTanh:
            for (double& x : v) x = std::tanh(x);
            break;
        case Activation::kSoftmax:
            v = softmax(v);
            break;
    }
}

inline Vec dense_forward(const DenseLayer& layer, const Vec& input) {
    require_dim(layer.weights.cols, input.size(), "dense_forward: input");
    Vec out;
    matvec(layer.weights, input, out);
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += layer.biases[r];
    apply_activation(layer.activation, out);
    return out;
}

// Glorot-uniform init: U(-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))).
inline DenseLayer make_dense_layer(std::size_t input_dim, std::size_t output_dim,
                                   Activation act, std::mt19937_64& rng) {
    DenseLayer layer;
    layer.weights = Tensor2(output_dim, input_dim);
    layer.biases.assign(output_dim, 0.0);
    layer.activation = act;
    const double limit = std::sqrt(6.0 / static_cast<double>(input_dim + output_dim));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& w : layer.weights.data) w = dist(rng);
    return layer;
}

}  // namespace hecad::nn
