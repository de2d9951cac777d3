#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace hecad {

// The three layers of the deployment hierarchy, ordered bottom to top.
enum class Tier : int { kIot = 0, kEdge = 1, kCloud = 2 };

inline constexpr std::size_t kNumTiers = 3;
inline constexpr std::array<Tier, kNumTiers> kAllTiers = {Tier::kIot, Tier::kEdge, Tier::kCloud};

inline std::string tier_name(Tier t) {
    switch (t) {
        case Tier::kIot: return "iot";
        case Tier::kEdge: return "edge";
        case Tier::kCloud: return "cloud";
    }
    return "?";
}

inline Tier parse_tier(const std::string& name) {
    if (name == "iot") return Tier::kIot;
    if (name == "edge") return Tier::kEdge;
    if (name == "cloud") return Tier::kCloud;
    throw std::invalid_argument("unknown tier '" + name + "'");
}

inline std::size_t tier_index(Tier t) { return static_cast<std::size_t>(t); }

}  // namespace hecad
