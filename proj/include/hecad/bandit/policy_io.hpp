#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hecad/bandit/policy.hpp"
#include "hecad/models/checkpoint.hpp"

namespace hecad::bandit {

// Policy checkpoints share the detector container format (kind = "policy").
inline nlohmann::json policy_to_json(const PolicyNetwork& policy) {
    nlohmann::json j;
    j["format"] = models::kCheckpointFormat;
    j["version"] = models::kCheckpointVersion;
    j["kind"] = "policy";
    j["architecture"] = {
        {"input_dim", policy.input_dim},
        {"hidden_units", policy.hidden_units},
        {"actions", kNumActions},
    };
    j["params"] = nn::flatten_params(policy.net);
    return j;
}

inline PolicyNetwork policy_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != models::kCheckpointFormat)
        throw std::runtime_error("policy checkpoint: unrecognized format field");
    if (j.value("kind", "") != "policy")
        throw std::runtime_error("policy checkpoint: kind is not 'policy'");
    const auto& a = j.at("architecture");
    if (a.value("actions", kNumActions) != kNumActions)
        throw std::runtime_error("policy checkpoint: unsupported action count");
    PolicyNetwork policy = make_policy(a.at("input_dim"), a.at("hidden_units"), nn::RngSeed{0});
    const nn::Vec params = j.at("params").get<nn::Vec>();
    nn::load_params(policy.net, params);
    return policy;
}

inline void save_policy_checkpoint(const std::string& path, const PolicyNetwork& policy) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_policy_checkpoint: cannot open " + path);
    out << policy_to_json(policy).dump(1) << '\n';
}

inline PolicyNetwork load_policy_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_policy_checkpoint: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return policy_from_json(j);
}

}  // namespace hecad::bandit
