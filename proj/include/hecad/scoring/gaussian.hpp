#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hecad/nn/tensor.hpp"

namespace hecad::scoring {

using nn::Tensor2;
using nn::Vec;

// Multivariate normal over reconstruction errors (1x1 in the univariate
// case). The covariance is regularized with +1e-6 I before factorization, so
// degenerate (zero-variance) dimensions stay invertible. The Cholesky factor
// and log-determinant are cached at fit time.
struct GaussianErrorModel {
    Vec mu;
    Tensor2 sigma;  // dim x dim, regularized
    std::size_t dim = 0;

    Tensor2 chol;       // lower-triangular L with sigma = L L^T
    double log_det = 0.0;

    static constexpr double kRegularizer = 1e-6;
};

namespace detail {

// Cholesky factorization of a symmetric positive-definite matrix.
inline Tensor2 cholesky(const Tensor2& a) {
    const std::size_t n = a.rows;
    Tensor2 l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a.at(i, j);
            for (std::size_t k = 0; k < j; ++k) sum -= l.at(i, k) * l.at(j, k);
            if (i == j) {
                if (sum <= 0.0)
                    throw std::runtime_error("cholesky: matrix not positive definite");
                l.at(i, j) = std::sqrt(sum);
            } else {
                l.at(i, j) = sum / l.at(j, j);
            }
        }
    }
    return l;
}

// Solves L y = b by forward substitution.
inline Vec forward_solve(const Tensor2& l, const Vec& b) {
    const std::size_t n = l.rows;
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= l.at(i, k) * y[k];
        y[i] = sum / l.at(i, i);
    }
    return y;
}

}  // namespace detail

// Recomputes the cached Cholesky factor and log-determinant from sigma.
// Needed after deserializing a model.
inline void refresh_factorization(GaussianErrorModel& model) {
    model.chol = detail::cholesky(model.sigma);
    model.log_det = 0.0;
    for (std::size_t i = 0; i < model.dim; ++i)
        model.log_det += 2.0 * std::log(model.chol.at(i, i));
}

// Sample mean and sample covariance (n-1 normalization) of the error vectors.
inline GaussianErrorModel fit_error_model(const std::vector<Vec>& errors) {
    if (errors.size() < 2)
        throw std::invalid_argument("fit_error_model: need at least 2 error vectors, got " +
                                    std::to_string(errors.size()));
    const std::size_t dim = errors.front().size();
    for (const auto& e : errors)
        if (e.size() != dim)
            throw std::invalid_argument("fit_error_model: inconsistent error dimensions");

    GaussianErrorModel model;
    model.dim = dim;
    model.mu.assign(dim, 0.0);
    const double n = static_cast<double>(errors.size());
    for (const auto& e : errors)
        for (std::size_t d = 0; d < dim; ++d) model.mu[d] += e[d];
    for (std::size_t d = 0; d < dim; ++d) model.mu[d] /= n;

    model.sigma = Tensor2(dim, dim);
    for (const auto& e : errors)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                model.sigma.at(i, j) += (e[i] - model.mu[i]) * (e[j] - model.mu[j]);
    for (auto& v : model.sigma.data) v /= (n - 1.0);
    for (std::size_t i = 0; i < dim; ++i) model.sigma.at(i, i) += GaussianErrorModel::kRegularizer;

    refresh_factorization(model);
    return model;
}

// log N(error; mu, sigma) = -1/2 [ dim ln(2pi) + ln det Sigma + mahalanobis^2 ]
inline double log_pd(const GaussianErrorModel& model, const Vec& error) {
    nn::require_dim(model.dim, error.size(), "log_pd: error vector");
    Vec centered(model.dim);
    for (std::size_t d = 0; d < model.dim; ++d) centered[d] = error[d] - model.mu[d];
    const Vec y = detail::forward_solve(model.chol, centered);
    double quad = 0.0;
    for (double v : y) quad += v * v;
    constexpr double kLog2Pi = 1.8378770664093453;
    return -0.5 * (static_cast<double>(model.dim) * kLog2Pi + model.log_det + quad);
}

}  // namespace hecad::scoring
