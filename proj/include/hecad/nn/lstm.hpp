#pragma once

#include <cmath>
#include <random>
#include <stdexcept>

#include "hecad/nn/dense.hpp"
#include "hecad/nn/tensor.hpp"

namespace hecad::nn {

// Two bias layouts are supported:
//   kSingle  one bias vector per gate set (vanilla LSTM)
//   kDouble  separate input-side and recurrent-side bias vectors
//            (the layout used by fused GPU kernels); the two vectors act
//            additively, so kDouble with the second vector at zero is
//            numerically identical to kSingle.
enum class BiasConvention { kSingle, kDouble };

// Gate blocks are stacked in the order: input, forget, candidate, output.
struct LstmCell {
    std::size_t input_dim = 0;
    std::size_t units = 0;
    BiasConvention bias_convention = BiasConvention::kSingle;
    Tensor2 w_input;  // 4U x I
    Tensor2 w_recur;  // 4U x U
    Vec bias;         // 4U
    Vec bias_recur;   // 4U when kDouble, empty otherwise
};

inline std::size_t count_parameters_lstm(const LstmCell& cell) {
    if (cell.input_dim == 0 || cell.units == 0)
        throw std::invalid_argument("count_parameters_lstm: input_dim and units must be > 0");
    const std::size_t u = cell.units;
    const std::size_t base = 4 * (u * (cell.input_dim + u) + u);
    return cell.bias_convention == BiasConvention::kDouble ? base + 4 * u : base;
}

inline LstmCell make_lstm_cell(std::size_t input_dim, std::size_t units,
                               BiasConvention convention, std::mt19937_64& rng) {
    if (input_dim == 0 || units == 0)
        throw std::invalid_argument("make_lstm_cell: input_dim and units must be > 0");
    LstmCell cell;
    cell.input_dim = input_dim;
    cell.units = units;
    cell.bias_convention = convention;
    cell.w_input = Tensor2(4 * units, input_dim);
    cell.w_recur = Tensor2(4 * units, units);
    cell.bias.assign(4 * units, 0.0);
    if (convention == BiasConvention::kDouble) cell.bias_recur.assign(4 * units, 0.0);

    const double lim_in = std::sqrt(6.0 / static_cast<double>(input_dim + units));
    const double lim_rec = std::sqrt(6.0 / static_cast<double>(units + units));
    std::uniform_real_distribution<double> din(-lim_in, lim_in);
    std::uniform_real_distribution<double> drec(-lim_rec, lim_rec);
    for (double& w : cell.w_input.data) w = din(rng);
    for (double& w : cell.w_recur.data) w = drec(rng);
    return cell;
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Saved activations of one step, enough to run the backward pass.
struct LstmStepCache {
    Vec x;       // input
    Vec h_prev;  // previous hidden state
    Vec c_prev;  // previous cell state
    Vec gate_i, gate_f, gate_g, gate_o;
    Vec c;        // new cell state
    Vec tanh_c;   // tanh(c)
};

inline void lstm_step(const LstmCell& cell, const Vec& x, const Vec& h_prev, const Vec& c_prev,
                      Vec& h_out, Vec& c_out, LstmStepCache* cache = nullptr) {
    require_dim(cell.input_dim, x.size(), "lstm_step: input");
    require_dim(cell.units, h_prev.size(), "lstm_step: hidden state");
    require_dim(cell.units, c_prev.size(), "lstm_step: cell state");

    const std::size_t u = cell.units;
    Vec z;
    matvec(cell.w_input, x, z);
    Vec zr;
    matvec(cell.w_recur, h_prev, zr);
    for (std::size_t i = 0; i < 4 * u; ++i) {
        z[i] += zr[i] + cell.bias[i];
        if (!cell.bias_recur.empty()) z[i] += cell.bias_recur[i];
    }

    Vec gi(u), gf(u), gg(u), go(u);
    for (std::size_t i = 0; i < u; ++i) {
        gi[i] = sigmoid(z[i]);
        gf[i] = sigmoid(z[u + i]);
        gg[i] = std::tanh(z[2 * u + i]);
        go[i] = sigmoid(z[3 * u + i]);
    }

    c_out.resize(u);
    h_out.resize(u);
    Vec tc(u);
    for (std::size_t i = 0; i < u; ++i) {
        c_out[i] = gf[i] * c_prev[i] + gi[i] * gg[i];
        tc[i] = std::tanh(c_out[i]);
        h_out[i] = go[i] * tc[i];
    }

    if (cache) {
        cache->x = x;
        cache->h_prev = h_prev;
        cache->c_prev = c_prev;
        cache->gate_i = std::move(gi);
        cache->gate_f = std::move(gf);
        cache->gate_g = std::move(gg);
        cache->gate_o = std::move(go);
        cache->c = c_out;
        cache->tanh_c = std::move(tc);
    }
}

struct LstmGrads {
    Tensor2 dw_input;
    Tensor2 dw_recur;
    Vec dbias;
    Vec dbias_recur;

    void init_like(const LstmCell& cell) {
        dw_input = Tensor2(cell.w_input.rows, cell.w_input.cols);
        dw_recur = Tensor2(cell.w_recur.rows, cell.w_recur.cols);
        dbias.assign(cell.bias.size(), 0.0);
        dbias_recur.assign(cell.bias_recur.size(), 0.0);
    }
};

// Backward through one cached step. dh/dc are the gradients flowing into
// h_t/c_t; outputs are the gradients for the step inputs. Parameter
// gradients accumulate into `grads`.
inline void lstm_step_backward(const LstmCell& cell, const LstmStepCache& cache, const Vec& dh,
                               const Vec& dc_in, LstmGrads& grads, Vec& dx, Vec& dh_prev,
                               Vec& dc_prev) {
    const std::size_t u = cell.units;
    Vec dz(4 * u);
    dc_prev.assign(u, 0.0);
    for (std::size_t i = 0; i < u; ++i) {
        const double tc = cache.tanh_c[i];
        const double dc = dc_in[i] + dh[i] * cache.gate_o[i] * (1.0 - tc * tc);
        const double d_o = dh[i] * tc;
        const double d_i = dc * cache.gate_g[i];
        const double d_f = dc * cache.c_prev[i];
        const double d_g = dc * cache.gate_i[i];
        dz[i] = d_i * cache.gate_i[i] * (1.0 - cache.gate_i[i]);
        dz[u + i] = d_f * cache.gate_f[i] * (1.0 - cache.gate_f[i]);
        dz[2 * u + i] = d_g * (1.0 - cache.gate_g[i] * cache.gate_g[i]);
        dz[3 * u + i] = d_o * cache.gate_o[i] * (1.0 - cache.gate_o[i]);
        dc_prev[i] = dc * cache.gate_f[i];
    }

    outer_add(grads.dw_input, dz, cache.x);
    outer_add(grads.dw_recur, dz, cache.h_prev);
    for (std::size_t i = 0; i < 4 * u; ++i) {
        grads.dbias[i] += dz[i];
        if (!grads.dbias_recur.empty()) grads.dbias_recur[i] += dz[i];
    }

    dx.assign(cell.input_dim, 0.0);
    matvec_transposed_add(cell.w_input, dz, dx);
    dh_prev.assign(u, 0.0);
    matvec_transposed_add(cell.w_recur, dz, dh_prev);
}

}  // namespace hecad::nn
