#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "hecad/data/scaler.hpp"
#include "hecad/data/timeseries.hpp"
#include "hecad/models/checkpoint.hpp"
#include "hecad/sim/deployment.hpp"

namespace hecad::sim {

using json = nlohmann::json;

inline json profile_to_json(const LayerProfile& p) {
    return {{"tier", tier_name(p.tier)},
            {"exec_ms", p.exec_ms},
            {"net_rtt_ms", p.net_rtt_ms},
            {"payload_ms", p.payload_ms},
            {"jitter_frac", p.jitter_frac}};
}

inline LayerProfile profile_from_json(const json& j) {
    LayerProfile p;
    p.tier = parse_tier(j.at("tier"));
    p.exec_ms = j.at("exec_ms");
    p.net_rtt_ms = j.value("net_rtt_ms", 0.0);
    p.payload_ms = j.value("payload_ms", 0.0);
    p.jitter_frac = j.value("jitter_frac", 0.0);
    p.validate();
    return p;
}

inline json calibration_to_json(const scoring::GaussianErrorModel& model,
                                const scoring::DetectorCalibration& cal) {
    return {{"threshold", cal.threshold},
            {"confident_factor", cal.confident_factor},
            {"confident_fraction", cal.confident_fraction},
            {"error_model",
             {{"dim", model.dim}, {"mu", model.mu}, {"sigma", model.sigma.data}}}};
}

inline void calibration_from_json(const json& j, scoring::GaussianErrorModel& model,
                                  scoring::DetectorCalibration& cal) {
    cal.threshold = j.at("threshold");
    cal.confident_factor = j.value("confident_factor", 2.0);
    cal.confident_fraction = j.value("confident_fraction", 0.05);
    const auto& em = j.at("error_model");
    model.dim = em.at("dim");
    model.mu = em.at("mu").get<nn::Vec>();
    model.sigma = nn::Tensor2(model.dim, model.dim);
    model.sigma.data = em.at("sigma").get<nn::Vec>();
    if (model.sigma.data.size() != model.dim * model.dim)
        throw std::runtime_error("calibration: sigma size mismatch");
    scoring::refresh_factorization(model);
}

// Deployment bundle on disk: one JSON config referencing per-tier checkpoint
// files (paths relative to the config) and embedding profiles, calibrations,
// the training scaler, and the window spec.
struct DeploymentBundle {
    Deployment deployment;
    data::Scaler scaler;
    data::WindowSpec window_spec;
};

inline void save_deployment(const std::string& path, const DeploymentBundle& bundle,
                            const std::array<std::string, kNumTiers>& checkpoint_files) {
    json j;
    j["data_type"] = data_type_name(bundle.deployment.data_type);
    j["profiles"] = json::array();
    for (const auto& p : bundle.deployment.profiles) j["profiles"].push_back(profile_to_json(p));
    j["tiers"] = json::array();
    for (std::size_t i = 0; i < kNumTiers; ++i) {
        const auto& t = bundle.deployment.tiers[i];
        j["tiers"].push_back({{"tier", tier_name(static_cast<Tier>(static_cast<int>(i)))},
                              {"checkpoint", checkpoint_files[i]},
                              {"calibration", calibration_to_json(t.error_model, t.calibration)}});
    }
    j["scaler"] = {{"mean", bundle.scaler.mean}, {"stddev", bundle.scaler.stddev}};
    j["window"] = {{"length", bundle.window_spec.length}, {"stride", bundle.window_spec.stride}};

    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_deployment: cannot open " + path);
    out << j.dump(1) << '\n';
}

inline DeploymentBundle load_deployment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_deployment: cannot open " + path);
    json j;
    in >> j;

    DeploymentBundle bundle;
    bundle.deployment.data_type = parse_data_type(j.at("data_type"));
    const auto& profiles = j.at("profiles");
    if (profiles.size() != kNumTiers) throw std::runtime_error("load_deployment: need 3 profiles");
    for (const auto& pj : profiles) {
        const LayerProfile p = profile_from_json(pj);
        bundle.deployment.profiles[tier_index(p.tier)] = p;
    }
    const auto base = std::filesystem::path(path).parent_path();
    for (const auto& tj : j.at("tiers")) {
        const Tier tier = parse_tier(tj.at("tier"));
        auto& slot = bundle.deployment.tiers[tier_index(tier)];
        std::filesystem::path ckpt = tj.at("checkpoint").get<std::string>();
        if (ckpt.is_relative()) ckpt = base / ckpt;
        slot.detector = models::load_detector_checkpoint(ckpt.string());
        calibration_from_json(tj.at("calibration"), slot.error_model, slot.calibration);
    }
    bundle.scaler.mean = j.at("scaler").at("mean").get<nn::Vec>();
    bundle.scaler.stddev = j.at("scaler").at("stddev").get<nn::Vec>();
    bundle.window_spec.length = j.at("window").at("length");
    bundle.window_spec.stride = j.at("window").at("stride");
    bundle.deployment.validate();
    return bundle;
}

}  // namespace hecad::sim
