#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hecad/nn/tensor.hpp"

namespace hecad::nn {

enum class OptimizerKind { kSgd, kRmsProp };

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::kSgd;
    double learning_rate = 0.01;
    double rmsprop_decay = 0.9;
    double rmsprop_epsilon = 1e-8;
    double l2_gamma = 0.0;  // weight decay on kernels; biases are not decayed

    void validate() const {
        if (learning_rate <= 0.0) throw std::invalid_argument("OptimizerConfig: learning_rate must be > 0");
        if (l2_gamma < 0.0) throw std::invalid_argument("OptimizerConfig: l2_gamma must be >= 0");
    }
};

// Per-parameter-block state. RMSProp keeps one running squared-gradient cache
// per block; SGD keeps nothing. Blocks are identified by registration order,
// which must be stable across steps.
class Optimizer {
public:
    explicit Optimizer(const OptimizerConfig& cfg) : cfg_(cfg) {
        if (cfg_.learning_rate < 0.0) throw std::invalid_argument("Optimizer: learning_rate must be >= 0");
    }

    const OptimizerConfig& config() const { return cfg_; }

    // Applies one update to `params` given `grads`. Call with the same block
    // sequence every step.
    void apply(std::size_t block_id, double* params, const double* grads, std::size_t n) {
        const double lr = cfg_.learning_rate;
        if (cfg_.kind == OptimizerKind::kSgd) {
            for (std::size_t i = 0; i < n; ++i) params[i] -= lr * grads[i];
            return;
        }
        if (block_id >= caches_.size()) caches_.resize(block_id + 1);
        Vec& cache = caches_[block_id];
        if (cache.size() != n) cache.assign(n, 0.0);
        const double d = cfg_.rmsprop_decay;
        const double eps = cfg_.rmsprop_epsilon;
        for (std::size_t i = 0; i < n; ++i) {
            cache[i] = d * cache[i] + (1.0 - d) * grads[i] * grads[i];
            params[i] -= lr * grads[i] / (std::sqrt(cache[i]) + eps);
        }
    }

private:
    OptimizerConfig cfg_;
    std::vector<Vec> caches_;
};

inline void clip_elementwise(Vec& v, double bound) {
    for (double& x : v) {
        if (x > bound) x = bound;
        if (x < -bound) x = -bound;
    }
}

}  // namespace hecad::nn
