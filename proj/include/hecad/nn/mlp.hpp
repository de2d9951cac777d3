#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "hecad/nn/dense.hpp"
#include "hecad/nn/optimizer.hpp"
#include "hecad/nn/tensor.hpp"

namespace hecad::nn {

// Feed-forward stack of dense layers. All models in the repo that are not
// recurrent (autoencoders, the policy network) are instances of this.
struct Mlp {
    std::vector<DenseLayer> layers;

    std::size_t input_dim() const { return layers.front().input_dim(); }
    std::size_t output_dim() const { return layers.back().output_dim(); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) n += l.parameter_count();
        return n;
    }
};

inline Vec mlp_forward(const Mlp& net, const Vec& input) {
    Vec v = input;
    for (const auto& layer : net.layers) v = dense_forward(layer, v);
    return v;
}

struct MlpForwardCache {
    std::vector<Vec> inputs;         // input seen by each layer
    std::vector<Vec> outputs;        // post-activation output of each layer
    std::vector<Vec> dropout_masks;  // per layer; empty vec = no dropout applied
};

// Forward pass with optional inverted dropout after each hidden layer.
// Masks scale kept units by 1/(1-rate) so inference uses weights unchanged.
inline Vec mlp_forward_cached(const Mlp& net, const Vec& input, MlpForwardCache& cache,
                              double dropout_rate = 0.0, std::mt19937_64* rng = nullptr) {
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
        throw std::invalid_argument("mlp_forward_cached: dropout_rate must be in [0,1)");
    const std::size_t n_layers = net.layers.size();
    cache.inputs.assign(n_layers, {});
    cache.outputs.assign(n_layers, {});
    cache.dropout_masks.assign(n_layers, {});
    Vec v = input;
    for (std::size_t l = 0; l < n_layers; ++l) {
        cache.inputs[l] = v;
        v = dense_forward(net.layers[l], v);
        const bool hidden = l + 1 < n_layers;
        if (hidden && dropout_rate > 0.0 && rng != nullptr) {
            std::bernoulli_distribution keep(1.0 - dropout_rate);
            Vec mask(v.size(), 0.0);
            const double scale = 1.0 / (1.0 - dropout_rate);
            for (std::size_t i = 0; i < v.size(); ++i) {
                mask[i] = keep(*rng) ? scale : 0.0;
                v[i] *= mask[i];
            }
            cache.dropout_masks[l] = std::move(mask);
        }
        cache.outputs[l] = v;
    }
    return v;
}

struct MlpGrads {
    std::vector<Tensor2> dw;
    std::vector<Vec> db;

    void init_like(const Mlp& net) {
        dw.clear();
        db.clear();
        for (const auto& l : net.layers) {
            dw.emplace_back(l.weights.rows, l.weights.cols);
            db.emplace_back(l.biases.size(), 0.0);
        }
    }
};

// Backpropagates `d_top` through the cached forward pass, accumulating into
// `grads`. If `top_is_preactivation` the caller already converted the loss
// gradient to pre-activation (logit) space for the last layer; this is how
// the softmax/cross-entropy style losses avoid forming the full Jacobian.
inline void mlp_backward(const Mlp& net, const MlpForwardCache& cache, const Vec& d_top,
                         bool top_is_preactivation, MlpGrads& grads) {
    const std::size_t n_layers = net.layers.size();
    Vec d_out = d_top;  // gradient wrt the (possibly masked) layer output
    for (std::size_t li = n_layers; li-- > 0;) {
        const DenseLayer& layer = net.layers[li];
        const Vec& out = cache.outputs[li];
        const Vec& mask = cache.dropout_masks[li];

        Vec dz;
        if (li == n_layers - 1 && top_is_preactivation) {
            dz = d_out;
        } else {
            // Undo the dropout mask first: cached outputs are post-mask.
            Vec d_act = d_out;
            Vec act_out = out;
            if (!mask.empty()) {
                for (std::size_t i = 0; i < d_act.size(); ++i) {
                    d_act[i] *= mask[i];
                    // pre-mask activation value, needed for tanh'(x) below
                    act_out[i] = (mask[i] != 0.0) ? out[i] / mask[i] : 0.0;
                }
            }
            switch (layer.activation) {
                case Activation::kLinear:
                    dz = std::move(d_act);
                    break;
                case Activation::kTanh:
                    dz.resize(d_act.size());
                    for (std::size_t i = 0; i < d_act.size(); ++i)
                        dz[i] = d_act[i] * (1.0 - act_out[i] * act_out[i]);
                    break;
                case Activation::kSoftmax: {
                    dz.resize(d_act.size());
                    double dot = 0.0;
                    for (std::size_t i = 0; i < d_act.size(); ++i) dot += d_act[i] * act_out[i];
                    for (std::size_t i = 0; i < d_act.size(); ++i)
                        dz[i] = act_out[i] * (d_act[i] - dot);
                    break;
                }
            }
        }

        outer_add(grads.dw[li], dz, cache.inputs[li]);
        for (std::size_t i = 0; i < dz.size(); ++i) grads.db[li][i] += dz[i];

        if (li > 0) {
            d_out.assign(cache.inputs[li].size(), 0.0);
            matvec_transposed_add(layer.weights, dz, d_out);
        }
    }
}

enum class Loss { kMae, kMse, kReinforce };

// One mini-batch gradient step.
//
// Losses (scalar reported is the batch mean):
//   mae        sum_d |y_hat - y|           targets are the desired outputs
//   mse        sum_d (y_hat - y)^2         targets are the desired outputs
//   reinforce  -sum_k c_k log(s_k)         targets are per-sample coefficient
//                                          vectors c (e.g. advantage-weighted
//                                          one-hot actions); requires a
//                                          softmax output layer
//
// Dropout is applied only here (training); inference paths never rescale.
// l2_gamma in `opt.config()` decays weights (not biases) once per step.
inline double train_step(Mlp& net, const Tensor2& batch, const Tensor2& targets, Loss loss,
                         Optimizer& opt, double dropout_rate, std::mt19937_64& rng) {
    if (batch.rows == 0) throw std::invalid_argument("train_step: empty batch");
    if (batch.rows != targets.rows) throw std::invalid_argument("train_step: batch/target row mismatch");
    require_dim(net.input_dim(), batch.cols, "train_step: batch columns");
    require_dim(net.output_dim(), targets.cols, "train_step: target columns");

    const double n = static_cast<double>(batch.rows);
    MlpGrads grads;
    grads.init_like(net);
    double total_loss = 0.0;

    MlpForwardCache cache;
    for (std::size_t i = 0; i < batch.rows; ++i) {
        Vec x(batch.row(i), batch.row(i) + batch.cols);
        Vec y(targets.row(i), targets.row(i) + targets.cols);
        Vec out = mlp_forward_cached(net, x, cache, dropout_rate, &rng);

        Vec d_top(out.size(), 0.0);
        bool top_is_preactivation = false;
        switch (loss) {
            case Loss::kMse:
                for (std::size_t d = 0; d < out.size(); ++d) {
                    const double diff = out[d] - y[d];
                    total_loss += diff * diff;
                    d_top[d] = 2.0 * diff / n;
                }
                break;
            case Loss::kMae:
                for (std::size_t d = 0; d < out.size(); ++d) {
                    const double diff = out[d] - y[d];
                    total_loss += std::abs(diff);
                    d_top[d] = (diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0)) / n;
                }
                break;
            case Loss::kReinforce: {
                if (net.layers.back().activation != Activation::kSoftmax)
                    throw std::invalid_argument("train_step: reinforce loss requires a softmax head");
                double coeff_sum = 0.0;
                for (std::size_t d = 0; d < out.size(); ++d) {
                    total_loss += -y[d] * std::log(std::max(out[d], 1e-12));
                    coeff_sum += y[d];
                }
                for (std::size_t d = 0; d < out.size(); ++d)
                    d_top[d] = (coeff_sum * out[d] - y[d]) / n;
                top_is_preactivation = true;
                break;
            }
        }
        mlp_backward(net, cache, d_top, top_is_preactivation, grads);
    }

    total_loss /= n;
    if (!std::isfinite(total_loss))
        throw std::runtime_error("train_step: non-finite loss (" + std::to_string(total_loss) + ")");

    const double gamma = opt.config().l2_gamma;
    std::size_t block = 0;
    for (std::size_t li = 0; li < net.layers.size(); ++li) {
        if (gamma > 0.0) {
            for (std::size_t i = 0; i < grads.dw[li].data.size(); ++i)
                grads.dw[li].data[i] += gamma * net.layers[li].weights.data[i];
        }
        opt.apply(block++, net.layers[li].weights.data.data(), grads.dw[li].data.data(),
                  grads.dw[li].data.size());
        opt.apply(block++, net.layers[li].biases.data(), grads.db[li].data(),
                  grads.db[li].size());
    }
    return total_loss;
}

// --- flat parameter views (checkpointing, gradient checks) ------------------

inline Vec flatten_params(const Mlp& net) {
    Vec flat;
    flat.reserve(net.parameter_count());
    for (const auto& l : net.layers) {
        flat.insert(flat.end(), l.weights.data.begin(), l.weights.data.end());
        flat.insert(flat.end(), l.biases.begin(), l.biases.end());
    }
    return flat;
}

inline void load_params(Mlp& net, const Vec& flat) {
    require_dim(net.parameter_count(), flat.size(), "load_params: parameter vector");
    std::size_t off = 0;
    for (auto& l : net.layers) {
        std::copy(flat.begin() + off, flat.begin() + off + l.weights.data.size(),
                  l.weights.data.begin());
        off += l.weights.data.size();
        std::copy(flat.begin() + off, flat.begin() + off + l.biases.size(), l.biases.begin());
        off += l.biases.size();
    }
}

inline Vec flatten_grads(const MlpGrads& grads) {
    Vec flat;
    for (std::size_t li = 0; li < grads.dw.size(); ++li) {
        flat.insert(flat.end(), grads.dw[li].data.begin(), grads.dw[li].data.end());
        flat.insert(flat.end(), grads.db[li].begin(), grads.db[li].end());
    }
    return flat;
}

}  // namespace hecad::nn
