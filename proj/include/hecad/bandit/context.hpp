#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hecad/data/timeseries.hpp"
#include "hecad/models/detector.hpp"

namespace hecad::bandit {

// The contextual-state families and their fixed dimensions. The policy (and
// the kNN schemes) see one of these, never the raw window.
enum class StateKind {
    kHandcraftedUnivariate,  // 28 = 7 days x (min, max, mean, std)
    kEncodedMultivariate,    // 100 = (h, c) of the 50-unit encoder
    kEncodedUnivariate,      // 201 = autoencoder bottleneck
};

inline std::size_t state_dim(StateKind kind) {
    switch (kind) {
        case StateKind::kHandcraftedUnivariate: return 28;
        case StateKind::kEncodedMultivariate: return 100;
        case StateKind::kEncodedUnivariate: return 201;
    }
    return 0;
}

// Hidden-layer sizing used for each state family.
inline std::size_t default_hidden_units(StateKind kind) {
    switch (kind) {
        case StateKind::kHandcraftedUnivariate: return 100;
        case StateKind::kEncodedMultivariate: return 300;
        case StateKind::kEncodedUnivariate: return 500;
    }
    return 0;
}

struct ContextualState {
    nn::Vec vector;
    StateKind kind = StateKind::kHandcraftedUnivariate;
};

// Day statistics of a one-week univariate window, day-major:
// (min, max, mean, std) for day 0, then day 1, ... Population std.
inline ContextualState extract_handcrafted(const data::Window& window) {
    constexpr std::size_t kDays = 7;
    constexpr std::size_t kStepsPerDay = 96;
    if (window.dims() != 1 || window.length() != kDays * kStepsPerDay)
        throw std::invalid_argument("extract_handcrafted: expected a 672x1 window, got " +
                                    std::to_string(window.length()) + "x" +
                                    std::to_string(window.dims()));
    ContextualState state;
    state.kind = StateKind::kHandcraftedUnivariate;
    state.vector.reserve(4 * kDays);
    for (std::size_t day = 0; day < kDays; ++day) {
        double mn = std::numeric_limits<double>::infinity();
        double mx = -std::numeric_limits<double>::infinity();
        double mean = 0.0;
        for (std::size_t s = 0; s < kStepsPerDay; ++s) {
            const double v = window.data.at(day * kStepsPerDay + s, 0);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
            mean += v;
        }
        mean /= static_cast<double>(kStepsPerDay);
        double var = 0.0;
        for (std::size_t s = 0; s < kStepsPerDay; ++s) {
            const double diff = window.data.at(day * kStepsPerDay + s, 0) - mean;
            var += diff * diff;
        }
        var /= static_cast<double>(kStepsPerDay);
        state.vector.push_back(mn);
        state.vector.push_back(mx);
        state.vector.push_back(mean);
        state.vector.push_back(std::sqrt(var));
    }
    return state;
}

// Encoded contextual state from a detector with an encoder part.
inline ContextualState extract_encoded(const models::TrainedDetector& detector,
                                       const data::Window& window) {
    ContextualState state;
    state.vector = models::encode(detector, window);
    state.kind = detector.is_autoencoder() ? StateKind::kEncodedUnivariate
                                           : StateKind::kEncodedMultivariate;
    return state;
}

}  // namespace hecad::bandit
