#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hecad/nn/lstm.hpp"
#include "hecad/nn/rng.hpp"

namespace hecad::models {

// LSTM encoder-decoder. The decoder is seeded with the encoder's final
// states and reconstructs the sequence through a linear projection; its first
// input token is a zero vector. A bidirectional encoder runs one cell in each
// direction and concatenates the final states, so the decoder is twice as
// wide.
struct Seq2SeqArchitecture {
    std::size_t input_dim = 18;
    std::size_t encoder_units = 50;
    bool bidirectional_encoder = false;
    nn::BiasConvention bias_convention = nn::BiasConvention::kSingle;

    static Seq2SeqArchitecture iot() { return {18, 50, false, nn::BiasConvention::kSingle}; }
    static Seq2SeqArchitecture edge() { return {18, 100, false, nn::BiasConvention::kDouble}; }
    static Seq2SeqArchitecture cloud() { return {18, 100, true, nn::BiasConvention::kDouble}; }

    void validate() const {
        if (input_dim == 0 || encoder_units == 0)
            throw std::invalid_argument("Seq2SeqArchitecture: zero units or input dim");
    }

    std::size_t decoder_units() const { return encoder_units * (bidirectional_encoder ? 2 : 1); }

    std::size_t parameter_count() const {
        const std::size_t extra = bias_convention == nn::BiasConvention::kDouble ? 1 : 0;
        auto cell = [&](std::size_t in, std::size_t units) {
            return 4 * (units * (in + units) + units + extra * units);
        };
        std::size_t total = cell(input_dim, encoder_units);
        if (bidirectional_encoder) total += cell(input_dim, encoder_units);
        total += cell(input_dim, decoder_units());
        total += decoder_units() * input_dim + input_dim;  // projection
        return total;
    }
};

struct Seq2SeqModel {
    Seq2SeqArchitecture arch;
    nn::LstmCell encoder_fwd;
    nn::LstmCell encoder_bwd;  // only populated when bidirectional
    nn::LstmCell decoder;
    nn::DenseLayer projection;  // decoder_units -> input_dim, linear
};

inline Seq2SeqModel make_seq2seq(const Seq2SeqArchitecture& arch, nn::RngSeed seed) {
    arch.validate();
    Seq2SeqModel model;
    model.arch = arch;
    {
        auto rng = nn::make_rng(seed, 10);
        model.encoder_fwd = nn::make_lstm_cell(arch.input_dim, arch.encoder_units,
                                               arch.bias_convention, rng);
    }
    if (arch.bidirectional_encoder) {
        auto rng = nn::make_rng(seed, 11);
        model.encoder_bwd = nn::make_lstm_cell(arch.input_dim, arch.encoder_units,
                                               arch.bias_convention, rng);
    }
    {
        auto rng = nn::make_rng(seed, 12);
        model.decoder = nn::make_lstm_cell(arch.input_dim, arch.decoder_units(),
                                           arch.bias_convention, rng);
    }
    {
        auto rng = nn::make_rng(seed, 13);
        model.projection = nn::make_dense_layer(arch.decoder_units(), arch.input_dim,
                                                nn::Activation::kLinear, rng);
    }
    return model;
}

// Final encoder states for a sequence: (h, c) concatenated, with the two
// directions stacked as [h_fwd, h_bwd, c_fwd, c_bwd] for the bidirectional
// case.
struct EncoderState {
    nn::Vec h;
    nn::Vec c;

    nn::Vec concatenated() const {
        nn::Vec out = h;
        out.insert(out.end(), c.begin(), c.end());
        return out;
    }
};

inline EncoderState encode_sequence(const Seq2SeqModel& model, const nn::Tensor2& sequence) {
    nn::require_dim(model.arch.input_dim, sequence.cols, "encode_sequence: input dims");
    const std::size_t u = model.arch.encoder_units;
    nn::Vec h(u, 0.0), c(u, 0.0), h2, c2;
    for (std::size_t t = 0; t < sequence.rows; ++t) {
        nn::Vec x(sequence.row(t), sequence.row(t) + sequence.cols);
        nn::lstm_step(model.encoder_fwd, x, h, c, h2, c2);
        h.swap(h2);
        c.swap(c2);
    }
    EncoderState state{h, c};
    if (model.arch.bidirectional_encoder) {
        nn::Vec hb(u, 0.0), cb(u, 0.0);
        for (std::size_t t = sequence.rows; t-- > 0;) {
            nn::Vec x(sequence.row(t), sequence.row(t) + sequence.cols);
            nn::lstm_step(model.encoder_bwd, x, hb, cb, h2, c2);
            hb.swap(h2);
            cb.swap(c2);
        }
        state.h.insert(state.h.end(), hb.begin(), hb.end());
        state.c.insert(state.c.end(), cb.begin(), cb.end());
    }
    return state;
}

// Closed-loop reconstruction: each decoder step consumes the previous
// projected output (zero token at step 0).
inline nn::Tensor2 seq2seq_reconstruct(const Seq2SeqModel& model, const nn::Tensor2& sequence) {
    const EncoderState enc = encode_sequence(model, sequence);
    const std::size_t steps = sequence.rows;
    const std::size_t d = model.arch.input_dim;
    nn::Tensor2 out(steps, d);
    nn::Vec h = enc.h, c = enc.c, h2, c2;
    nn::Vec token(d, 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
        nn::lstm_step(model.decoder, token, h, c, h2, c2);
        h.swap(h2);
        c.swap(c2);
        token = nn::dense_forward(model.projection, h);
        for (std::size_t j = 0; j < d; ++j) out.at(t, j) = token[j];
    }
    return out;
}

}  // namespace hecad::models
