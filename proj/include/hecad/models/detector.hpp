#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "hecad/data/timeseries.hpp"
#include "hecad/models/autoencoder.hpp"
#include "hecad/models/seq2seq.hpp"
#include "hecad/models/seq2seq_train.hpp"
#include "hecad/nn/optimizer.hpp"
#include "hecad/tier.hpp"

namespace hecad::models {

// An anomaly detector plus its place in the hierarchy. Models are immutable
// after training and safe to share across threads.
struct TrainedDetector {
    Tier tier = Tier::kIot;
    std::size_t epochs_trained = 0;
    std::variant<AutoencoderModel, Seq2SeqModel> model;

    bool is_autoencoder() const { return std::holds_alternative<AutoencoderModel>(model); }
    const AutoencoderModel& ae() const { return std::get<AutoencoderModel>(model); }
    const Seq2SeqModel& s2s() const { return std::get<Seq2SeqModel>(model); }

    std::size_t parameter_count() const {
        if (is_autoencoder()) return ae().arch.parameter_count();
        return s2s().arch.parameter_count();
    }
};

inline TrainedDetector build_ae(const AeArchitecture& arch, nn::RngSeed seed,
                                Tier tier = Tier::kIot) {
    TrainedDetector det;
    det.tier = tier;
    det.model = make_autoencoder(arch, seed);
    return det;
}

inline TrainedDetector build_seq2seq(const Seq2SeqArchitecture& arch, nn::RngSeed seed,
                                     Tier tier = Tier::kIot) {
    TrainedDetector det;
    det.tier = tier;
    det.model = make_seq2seq(arch, seed);
    return det;
}

struct DetectorTrainConfig {
    nn::OptimizerConfig optimizer;  // SGD + mae for autoencoders, RMSProp + mse for seq2seq
    std::size_t epochs = 0;
    double dropout_rate = 0.3;
    double grad_clip = 5.0;  // applied on the recurrent path only
    nn::RngSeed seed;
    bool early_stop = true;
    std::size_t early_stop_patience = 50;
};

inline nn::Vec flatten_window(const data::Window& w) { return w.data.data; }

// Trains in place on normal windows only. The loss trace satisfies: with
// early stopping enabled, training halts once the best loss has not improved
// for `early_stop_patience` epochs.
inline TrainedDetector train_detector(TrainedDetector detector,
                                      const std::vector<data::Window>& windows,
                                      const DetectorTrainConfig& config) {
    if (windows.empty()) throw std::invalid_argument("train_detector: empty training set");
    for (const auto& w : windows)
        if (w.label)
            throw std::invalid_argument("train_detector: training windows must be normal-labeled");
    if (config.epochs == 0) return detector;

    auto rng = nn::make_rng(config.seed, 0x7ea1);
    nn::Optimizer opt(config.optimizer);
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    std::size_t epochs_run = 0;

    if (detector.is_autoencoder()) {
        auto& model = std::get<AutoencoderModel>(detector.model);
        const std::size_t in_dim = model.arch.input_dim();
        nn::Tensor2 batch(windows.size(), in_dim);
        for (std::size_t i = 0; i < windows.size(); ++i) {
            const nn::Vec flat = flatten_window(windows[i]);
            nn::require_dim(in_dim, flat.size(), "train_detector: window size");
            std::copy(flat.begin(), flat.end(), batch.row(i));
        }
        for (std::size_t e = 0; e < config.epochs; ++e) {
            const double loss =
                nn::train_step(model.net, batch, batch, nn::Loss::kMae, opt, config.dropout_rate, rng);
            ++epochs_run;
            if (loss < best_loss - 1e-12) {
                best_loss = loss;
                since_best = 0;
            } else if (++since_best >= config.early_stop_patience && config.early_stop) {
                break;
            }
        }
    } else {
        auto& model = std::get<Seq2SeqModel>(detector.model);
        std::vector<nn::Tensor2> seqs;
        seqs.reserve(windows.size());
        for (const auto& w : windows) {
            nn::require_dim(model.arch.input_dim, w.dims(), "train_detector: window dims");
            seqs.push_back(w.data);
        }
        for (std::size_t e = 0; e < config.epochs; ++e) {
            const double loss = seq2seq_train_epoch(model, seqs, opt, config.dropout_rate,
                                                    config.grad_clip, rng);
            if (!std::isfinite(loss))
                throw std::runtime_error("train_detector: non-finite training loss");
            ++epochs_run;
            if (loss < best_loss - 1e-12) {
                best_loss = loss;
                since_best = 0;
            } else if (++since_best >= config.early_stop_patience && config.early_stop) {
                break;
            }
        }
    }
    detector.epochs_trained += epochs_run;
    return detector;
}

// Reconstruction plus per-step elementwise absolute errors. Autoencoders map
// the flattened window; seq2seq models run closed-loop. Dropout is never
// applied here.
struct Reconstruction {
    nn::Tensor2 output;               // length x dims
    std::vector<nn::Vec> step_errors;  // per step, |x_t - x_hat_t| per dim
};

inline Reconstruction reconstruct(const TrainedDetector& detector, const data::Window& window) {
    Reconstruction rec;
    const std::size_t steps = window.length();
    const std::size_t dims = window.dims();
    if (detector.is_autoencoder()) {
        const auto& model = detector.ae();
        const nn::Vec flat = flatten_window(window);
        nn::require_dim(model.arch.input_dim(), flat.size(), "reconstruct: window size");
        const nn::Vec out = nn::mlp_forward(model.net, flat);
        rec.output = nn::Tensor2(steps, dims);
        rec.output.data = out;
    } else {
        const auto& model = detector.s2s();
        nn::require_dim(model.arch.input_dim, dims, "reconstruct: window dims");
        rec.output = seq2seq_reconstruct(model, window.data);
    }
    rec.step_errors.resize(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        rec.step_errors[t].resize(dims);
        for (std::size_t d = 0; d < dims; ++d)
            rec.step_errors[t][d] = std::abs(window.data.at(t, d) - rec.output.at(t, d));
    }
    return rec;
}

// Compact representation of a window: encoder (h,c) concatenated for seq2seq
// models, bottleneck activations for autoencoders.
inline nn::Vec encode(const TrainedDetector& detector, const data::Window& window) {
    if (detector.is_autoencoder()) {
        const auto& model = detector.ae();
        const nn::Vec flat = flatten_window(window);
        nn::require_dim(model.arch.input_dim(), flat.size(), "encode: window size");
        nn::Vec v = flat;
        for (std::size_t l = 0; l <= model.arch.bottleneck_layer(); ++l)
            v = nn::dense_forward(model.net.layers[l], v);
        return v;
    }
    const auto& model = detector.s2s();
    nn::require_dim(model.arch.input_dim, window.dims(), "encode: window dims");
    return encode_sequence(model, window.data).concatenated();
}

// FLOP estimate under a stated convention; the convention string travels with
// the number because published counts for the same models differ by choice of
// convention.
struct FlopEstimate {
    unsigned long long flops = 0;
    std::string convention;
};

inline FlopEstimate estimate_flops(const TrainedDetector& detector, std::size_t sequence_length = 128) {
    FlopEstimate est;
    est.convention =
        "2 flops per multiply-accumulate plus 1 per bias add; dense layers counted once per "
        "window, LSTM gates per time step; elementwise gate ops excluded";
    if (detector.is_autoencoder()) {
        const auto& sizes = detector.ae().arch.layer_sizes;
        unsigned long long total = 0;
        for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
            total += 2ull * sizes[i] * sizes[i + 1] + sizes[i + 1];
        est.flops = total;
        return est;
    }
    const auto& arch = detector.s2s().arch;
    auto cell_step = [&](std::size_t in, std::size_t units) {
        const unsigned long long biases =
            arch.bias_convention == nn::BiasConvention::kDouble ? 2ull : 1ull;
        return 8ull * units * (in + units) + 4ull * units * biases;
    };
    unsigned long long per_step = cell_step(arch.input_dim, arch.encoder_units);
    if (arch.bidirectional_encoder) per_step += cell_step(arch.input_dim, arch.encoder_units);
    per_step += cell_step(arch.input_dim, arch.decoder_units());
    per_step += 2ull * arch.decoder_units() * arch.input_dim + arch.input_dim;  // projection
    est.flops = per_step * static_cast<unsigned long long>(sequence_length);
    return est;
}

}  // namespace hecad::models
