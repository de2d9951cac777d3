#pragma once

#include <functional>
#include <stdexcept>

#include "hecad/nn/tensor.hpp"

namespace hecad::nn {

// Central-difference gradient oracle: (f(p + eps e_i) - f(p - eps e_i)) / 2 eps.
// Deliberately implementation-agnostic so it can referee any backprop path.
inline Vec finite_diff_gradient(const std::function<double(const Vec&)>& f, Vec params,
                                double eps) {
    if (eps <= 0.0) throw std::invalid_argument("finite_diff_gradient: eps must be > 0");
    Vec grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + eps;
        const double hi = f(params);
        params[i] = saved - eps;
        const double lo = f(params);
        params[i] = saved;
        grad[i] = (hi - lo) / (2.0 * eps);
    }
    return grad;
}

}  // namespace hecad::nn
