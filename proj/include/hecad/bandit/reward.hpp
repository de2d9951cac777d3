#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

namespace hecad::bandit {

// Delay cost in accuracy units: alpha*t / (1 + alpha*t), t in milliseconds.
// Monotone increasing in t, zero at t=0, bounded above by 1.
inline double cost(double t_e2e_ms, double alpha) {
    if (t_e2e_ms < 0.0) throw std::invalid_argument("cost: delay must be >= 0");
    if (alpha < 0.0) throw std::invalid_argument("cost: alpha must be >= 0");
    const double at = alpha * t_e2e_ms;
    return at / (1.0 + at);
}

// Per-input reward: detection accuracy minus delay cost. With accuracy in
// [0,1] and cost in [0,1) the reward lies in (-1, 1].
inline double reward(double accuracy, double cost_value) {
    return accuracy - cost_value;
}

// Best observed reward, used as the REINFORCE baseline. Non-decreasing over
// a training run; reset per run.
struct BaselineTracker {
    double best_reward = -std::numeric_limits<double>::infinity();

    void update(const std::vector<double>& batch_rewards) {
        for (double r : batch_rewards)
            if (r > best_reward) best_reward = r;
    }
};

}  // namespace hecad::bandit
