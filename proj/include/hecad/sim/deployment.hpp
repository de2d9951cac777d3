#pragma once

#include <array>
#include <stdexcept>

#include "hecad/models/detector.hpp"
#include "hecad/scoring/detection.hpp"
#include "hecad/scoring/gaussian.hpp"
#include "hecad/sim/profile.hpp"

namespace hecad::sim {

// Everything one layer needs to answer a detection request: the trained
// model, its fitted error distribution, and the calibrated threshold.
struct TierArtifacts {
    models::TrainedDetector detector;
    scoring::GaussianErrorModel error_model;
    scoring::DetectorCalibration calibration;
};

// The simulated K=3 hierarchy: exactly one detector per tier.
struct Deployment {
    DataType data_type = DataType::kUnivariate;
    std::array<LayerProfile, kNumTiers> profiles;
    std::array<TierArtifacts, kNumTiers> tiers;

    const TierArtifacts& at(Tier t) const { return tiers[tier_index(t)]; }
    const LayerProfile& profile(Tier t) const { return profiles[tier_index(t)]; }

    void validate() const {
        for (std::size_t i = 0; i < kNumTiers; ++i) {
            profiles[i].validate();
            if (tier_index(profiles[i].tier) != i)
                throw std::invalid_argument("Deployment: profiles must be ordered iot, edge, cloud");
        }
    }
};

// Full scoring pipeline of one tier on one (standardized) window:
// reconstruct, per-step logPD, threshold decision.
inline scoring::DetectionResult run_detection(const TierArtifacts& artifacts,
                                              const data::Window& window) {
    const models::Reconstruction rec = models::reconstruct(artifacts.detector, window);
    const nn::Vec logpds = scoring::per_step_log_pd(artifacts.error_model, rec.step_errors);
    return scoring::detect(logpds, artifacts.calibration);
}

}  // namespace hecad::sim
