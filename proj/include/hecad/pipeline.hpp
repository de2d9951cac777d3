#pragma once

#include <vector>

#include "hecad/data/splits.hpp"
#include "hecad/models/detector.hpp"
#include "hecad/scoring/detection.hpp"
#include "hecad/sim/deployment.hpp"

namespace hecad::pipeline {

// Train -> error model -> threshold for one detector. The Gaussian is fitted
// on the per-step reconstruction errors of the (normal) training windows and
// the threshold is the minimum training logPD, so the training set produces
// zero false positives by construction.
inline sim::TierArtifacts fit_tier(models::TrainedDetector detector,
                                   const std::vector<data::Window>& training_windows,
                                   const models::DetectorTrainConfig& config) {
    sim::TierArtifacts artifacts;
    artifacts.detector = models::train_detector(std::move(detector), training_windows, config);

    std::vector<nn::Vec> errors;
    for (const auto& w : training_windows) {
        const auto rec = models::reconstruct(artifacts.detector, w);
        errors.insert(errors.end(), rec.step_errors.begin(), rec.step_errors.end());
    }
    artifacts.error_model = scoring::fit_error_model(errors);
    artifacts.calibration = scoring::calibrate(artifacts.error_model, errors);
    return artifacts;
}

// Per-tier epoch budgets mirroring the increasing-complexity training setup;
// scaled down from the full-size budgets by `scale` for desk-size runs.
inline std::array<std::size_t, kNumTiers> ae_epoch_budgets(double scale = 1.0) {
    return {static_cast<std::size_t>(4000 * scale), static_cast<std::size_t>(6000 * scale),
            static_cast<std::size_t>(8000 * scale)};
}

}  // namespace hecad::pipeline
