#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "hecad/tier.hpp"

namespace hecad::sim {

enum class DataType { kUnivariate, kMultivariate };

inline std::string data_type_name(DataType t) {
    return t == DataType::kUnivariate ? "univariate" : "multivariate";
}

inline DataType parse_data_type(const std::string& name) {
    if (name == "univariate") return DataType::kUnivariate;
    if (name == "multivariate") return DataType::kMultivariate;
    throw std::invalid_argument("unknown data type '" + name + "'");
}

// Per-layer timing model. The network component is a single per-tier
// constant (round trip and serialization folded together); payload_time is
// available for configs that want to split it out and defaults to 0. The IoT
// layer executes locally, so its network component is 0.
struct LayerProfile {
    Tier tier = Tier::kIot;
    double exec_ms = 0.0;
    double net_rtt_ms = 0.0;
    double payload_ms = 0.0;
    double jitter_frac = 0.0;  // uniform +-fraction of exec time; 0 keeps runs deterministic

    void validate() const {
        if (exec_ms < 0.0 || net_rtt_ms < 0.0 || payload_ms < 0.0)
            throw std::invalid_argument("LayerProfile: durations must be >= 0");
        if (tier == Tier::kIot && net_rtt_ms + payload_ms != 0.0)
            throw std::invalid_argument("LayerProfile: iot tier must have zero network delay");
    }
};

// Execution means measured per data type, network components back-derived
// from the end-to-end numbers (250 ms to edge, 500 ms to cloud).
inline std::array<LayerProfile, kNumTiers> default_profiles(DataType data_type) {
    std::array<LayerProfile, kNumTiers> p{};
    const bool uni = data_type == DataType::kUnivariate;
    p[0] = {Tier::kIot, uni ? 12.4 : 591.0, 0.0, 0.0, 0.0};
    p[1] = {Tier::kEdge, uni ? 7.4 : 417.3, 250.0, 0.0, 0.0};
    p[2] = {Tier::kCloud, uni ? 4.5 : 232.3, 500.0, 0.0, 0.0};
    return p;
}

}  // namespace hecad::sim
