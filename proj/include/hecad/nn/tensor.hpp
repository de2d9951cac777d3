#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hecad::nn {

using Vec = std::vector<double>;

// Dense row-major matrix. Invariant: data.size() == rows * cols.
struct Tensor2 {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Vec data;

    Tensor2() = default;
    Tensor2(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double* row(std::size_t r) { return data.data() + r * cols; }

    std::size_t size() const { return data.size(); }
};

inline bool all_finite(const Vec& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

inline void require_dim(std::size_t expected, std::size_t actual, const std::string& what) {
    if (expected != actual) {
        throw std::invalid_argument(what + ": expected size " + std::to_string(expected) +
                                    ", got " + std::to_string(actual));
    }
}

// y = W x  (W is out x in)
inline void matvec(const Tensor2& w, const Vec& x, Vec& y) {
    y.assign(w.rows, 0.0);
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* wr = w.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < w.cols; ++c) acc += wr[c] * x[c];
        y[r] = acc;
    }
}

// y += W^T g  (scatter a row-space gradient back to the input space)
inline void matvec_transposed_add(const Tensor2& w, const Vec& g, Vec& y) {
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* wr = w.row(r);
        const double gr = g[r];
        for (std::size_t c = 0; c < w.cols; ++c) y[c] += wr[c] * gr;
    }
}

// W += scale * (g outer x)
inline void outer_add(Tensor2& w, const Vec& g, const Vec& x, double scale = 1.0) {
    for (std::size_t r = 0; r < w.rows; ++r) {
        double* wr = w.row(r);
        const double gr = g[r] * scale;
        for (std::size_t c = 0; c < w.cols; ++c) wr[c] += gr * x[c];
    }
}

}  // namespace hecad::nn
