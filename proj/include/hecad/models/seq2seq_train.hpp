#pragma once

#include <random>
#include <vector>

#include "hecad/models/seq2seq.hpp"
#include "hecad/nn/optimizer.hpp"

namespace hecad::models {

namespace detail {

struct Seq2SeqGrads {
    nn::LstmGrads enc_fwd;
    nn::LstmGrads enc_bwd;
    nn::LstmGrads dec;
    nn::Tensor2 d_proj_w;
    nn::Vec d_proj_b;

    void init_like(const Seq2SeqModel& m) {
        enc_fwd.init_like(m.encoder_fwd);
        if (m.arch.bidirectional_encoder) enc_bwd.init_like(m.encoder_bwd);
        dec.init_like(m.decoder);
        d_proj_w = nn::Tensor2(m.projection.weights.rows, m.projection.weights.cols);
        d_proj_b.assign(m.projection.biases.size(), 0.0);
    }
};

// Teacher-forced forward + full BPTT for one sequence. Returns the mean
// squared error per element and accumulates parameter gradients.
inline double seq2seq_backprop(const Seq2SeqModel& model, const nn::Tensor2& seq,
                               double dropout_rate, std::mt19937_64* rng, Seq2SeqGrads& grads) {
    const std::size_t steps = seq.rows;
    const std::size_t d = model.arch.input_dim;
    const std::size_t eu = model.arch.encoder_units;
    const std::size_t du = model.arch.decoder_units();
    const bool bi = model.arch.bidirectional_encoder;

    // --- encoder forward ---
    std::vector<nn::LstmStepCache> enc_caches(steps);
    nn::Vec h(eu, 0.0), c(eu, 0.0), h2, c2;
    for (std::size_t t = 0; t < steps; ++t) {
        nn::Vec x(seq.row(t), seq.row(t) + d);
        nn::lstm_step(model.encoder_fwd, x, h, c, h2, c2, &enc_caches[t]);
        h.swap(h2);
        c.swap(c2);
    }
    std::vector<nn::LstmStepCache> enc_bwd_caches;
    nn::Vec hb, cb;
    if (bi) {
        enc_bwd_caches.resize(steps);
        hb.assign(eu, 0.0);
        cb.assign(eu, 0.0);
        for (std::size_t t = steps; t-- > 0;) {
            nn::Vec x(seq.row(t), seq.row(t) + d);
            nn::lstm_step(model.encoder_bwd, x, hb, cb, h2, c2, &enc_bwd_caches[t]);
            hb.swap(h2);
            cb.swap(c2);
        }
    }

    // --- decoder forward (teacher forcing, inverted dropout before the
    //     projection) ---
    nn::Vec dh0 = h, dc0 = c;
    if (bi) {
        dh0.insert(dh0.end(), hb.begin(), hb.end());
        dc0.insert(dc0.end(), cb.begin(), cb.end());
    }
    std::vector<nn::LstmStepCache> dec_caches(steps);
    std::vector<nn::Vec> masked_h(steps);
    std::vector<nn::Vec> masks(steps);
    std::vector<nn::Vec> d_out(steps);
    nn::Vec hd = dh0, cd = dc0;
    double loss = 0.0;
    const double denom = static_cast<double>(steps * d);
    for (std::size_t t = 0; t < steps; ++t) {
        nn::Vec u = (t == 0) ? nn::Vec(d, 0.0) : nn::Vec(seq.row(t - 1), seq.row(t - 1) + d);
        nn::lstm_step(model.decoder, u, hd, cd, h2, c2, &dec_caches[t]);
        hd.swap(h2);
        cd.swap(c2);

        nn::Vec mh = hd;
        if (dropout_rate > 0.0 && rng != nullptr) {
            std::bernoulli_distribution keep(1.0 - dropout_rate);
            nn::Vec mask(du);
            const double scale = 1.0 / (1.0 - dropout_rate);
            for (std::size_t i = 0; i < du; ++i) {
                mask[i] = keep(*rng) ? scale : 0.0;
                mh[i] *= mask[i];
            }
            masks[t] = std::move(mask);
        }
        masked_h[t] = mh;

        nn::Vec y = nn::dense_forward(model.projection, mh);
        d_out[t].resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = y[j] - seq.at(t, j);
            loss += diff * diff;
            d_out[t][j] = 2.0 * diff / denom;
        }
    }
    loss /= denom;

    // --- decoder backward ---
    nn::Vec dh_carry(du, 0.0), dc_carry(du, 0.0), dx, dh_prev, dc_prev;
    for (std::size_t t = steps; t-- > 0;) {
        nn::outer_add(grads.d_proj_w, d_out[t], masked_h[t]);
        for (std::size_t j = 0; j < d; ++j) grads.d_proj_b[j] += d_out[t][j];
        nn::Vec dh_step(du, 0.0);
        nn::matvec_transposed_add(model.projection.weights, d_out[t], dh_step);
        if (!masks[t].empty())
            for (std::size_t i = 0; i < du; ++i) dh_step[i] *= masks[t][i];
        for (std::size_t i = 0; i < du; ++i) dh_step[i] += dh_carry[i];

        nn::lstm_step_backward(model.decoder, dec_caches[t], dh_step, dc_carry, grads.dec, dx,
                               dh_prev, dc_prev);
        dh_carry.swap(dh_prev);  // teacher-forced inputs: dx is dropped
        dc_carry.swap(dc_prev);
    }

    // --- encoder backward (gradient enters through the decoder init state) ---
    nn::Vec dh_f(dh_carry.begin(), dh_carry.begin() + eu);
    nn::Vec dc_f(dc_carry.begin(), dc_carry.begin() + eu);
    for (std::size_t t = steps; t-- > 0;) {
        nn::lstm_step_backward(model.encoder_fwd, enc_caches[t], dh_f, dc_f, grads.enc_fwd, dx,
                               dh_prev, dc_prev);
        dh_f.swap(dh_prev);
        dc_f.swap(dc_prev);
    }
    if (bi) {
        nn::Vec dh_b(dh_carry.begin() + eu, dh_carry.end());
        nn::Vec dc_b(dc_carry.begin() + eu, dc_carry.end());
        // the backward-direction cell consumed the sequence reversed, so its
        // "previous" step is t+1
        for (std::size_t t = 0; t < steps; ++t) {
            nn::lstm_step_backward(model.encoder_bwd, enc_bwd_caches[t], dh_b, dc_b, grads.enc_bwd,
                                   dx, dh_prev, dc_prev);
            dh_b.swap(dh_prev);
            dc_b.swap(dc_prev);
        }
    }
    return loss;
}

// Applies l2 kernel decay, elementwise clipping, and one optimizer step.
inline double seq2seq_train_one(Seq2SeqModel& model, const nn::Tensor2& seq, double dropout_rate,
                                std::mt19937_64& rng, nn::Optimizer& opt, double grad_clip) {
    Seq2SeqGrads grads;
    grads.init_like(model);
    const double loss = seq2seq_backprop(model, seq, dropout_rate, &rng, grads);

    const double gamma = opt.config().l2_gamma;
    auto decay = [&](nn::Vec& g, const nn::Vec& w) {
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += gamma * w[i];
    };
    if (gamma > 0.0) {
        decay(grads.enc_fwd.dw_input.data, model.encoder_fwd.w_input.data);
        decay(grads.enc_fwd.dw_recur.data, model.encoder_fwd.w_recur.data);
        if (model.arch.bidirectional_encoder) {
            decay(grads.enc_bwd.dw_input.data, model.encoder_bwd.w_input.data);
            decay(grads.enc_bwd.dw_recur.data, model.encoder_bwd.w_recur.data);
        }
        decay(grads.dec.dw_input.data, model.decoder.w_input.data);
        decay(grads.dec.dw_recur.data, model.decoder.w_recur.data);
        decay(grads.d_proj_w.data, model.projection.weights.data);
    }

    std::size_t block = 0;
    auto step = [&](nn::Vec& params, nn::Vec& g) {
        if (grad_clip > 0.0) nn::clip_elementwise(g, grad_clip);
        opt.apply(block++, params.data(), g.data(), g.size());
    };
    auto step_cell = [&](nn::LstmCell& cell, nn::LstmGrads& g) {
        step(cell.w_input.data, g.dw_input.data);
        step(cell.w_recur.data, g.dw_recur.data);
        step(cell.bias, g.dbias);
        if (!cell.bias_recur.empty()) step(cell.bias_recur, g.dbias_recur);
    };
    step_cell(model.encoder_fwd, grads.enc_fwd);
    if (model.arch.bidirectional_encoder) step_cell(model.encoder_bwd, grads.enc_bwd);
    step_cell(model.decoder, grads.dec);
    step(model.projection.weights.data, grads.d_proj_w.data);
    step(model.projection.biases, grads.d_proj_b);
    return loss;
}

}  // namespace detail

// One teacher-forced pass over all sequences with per-sequence updates.
// Returns the mean per-element MSE across the epoch.
inline double seq2seq_train_epoch(Seq2SeqModel& model, const std::vector<nn::Tensor2>& sequences,
                                  nn::Optimizer& opt, double dropout_rate, double grad_clip,
                                  std::mt19937_64& rng) {
    double total = 0.0;
    for (const auto& seq : sequences)
        total += detail::seq2seq_train_one(model, seq, dropout_rate, rng, opt, grad_clip);
    return total / static_cast<double>(sequences.size());
}

// Teacher-forced loss without updates (used to monitor convergence).
inline double seq2seq_teacher_forced_loss(const Seq2SeqModel& model,
                                          const std::vector<nn::Tensor2>& sequences) {
    double total = 0.0;
    for (const auto& seq : sequences) {
        const EncoderState enc = encode_sequence(model, seq);
        const std::size_t steps = seq.rows;
        const std::size_t d = model.arch.input_dim;
        nn::Vec h = enc.h, c = enc.c, h2, c2;
        double loss = 0.0;
        for (std::size_t t = 0; t < steps; ++t) {
            nn::Vec u = (t == 0) ? nn::Vec(d, 0.0) : nn::Vec(seq.row(t - 1), seq.row(t - 1) + d);
            nn::lstm_step(model.decoder, u, h, c, h2, c2);
            h.swap(h2);
            c.swap(c2);
            nn::Vec y = nn::dense_forward(model.projection, h);
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = y[j] - seq.at(t, j);
                loss += diff * diff;
            }
        }
        total += loss / static_cast<double>(steps * d);
    }
    return total / static_cast<double>(sequences.size());
}

}  // namespace hecad::models
