#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "hecad/scoring/gaussian.hpp"

namespace hecad::scoring {

// Detection threshold in logPD units plus the two confidence knobs. The
// threshold is the minimum training-set logPD, so by construction no training
// step is flagged. Thresholds are negative in practice; "factor x threshold"
// with factor >= 1 is therefore a stricter (more negative) bar.
struct DetectorCalibration {
    double threshold = 0.0;
    double confident_factor = 2.0;
    double confident_fraction = 0.05;
};

struct DetectionResult {
    bool is_anomaly = false;
    bool is_confident = false;
    Vec per_step_logpd;
    std::size_t anomalous_step_count = 0;
};

inline Vec per_step_log_pd(const GaussianErrorModel& model, const std::vector<Vec>& step_errors) {
    Vec out;
    out.reserve(step_errors.size());
    for (const auto& e : step_errors) out.push_back(log_pd(model, e));
    return out;
}

inline DetectorCalibration calibrate(const GaussianErrorModel& model,
                                     const std::vector<Vec>& training_errors) {
    if (training_errors.empty()) throw std::invalid_argument("calibrate: empty training error set");
    DetectorCalibration cal;
    cal.threshold = log_pd(model, training_errors.front());
    for (std::size_t i = 1; i < training_errors.size(); ++i)
        cal.threshold = std::min(cal.threshold, log_pd(model, training_errors[i]));
    return cal;
}

// A sequence is anomalous if any step scores below the threshold. It is a
// confident detection if (i) some step scores below factor x threshold, or
// (ii) the anomalous-step count exceeds fraction x sequence length.
inline DetectionResult detect(const Vec& per_step_logpd, const DetectorCalibration& cal) {
    if (per_step_logpd.empty()) throw std::invalid_argument("detect: empty logPD vector");
    DetectionResult res;
    res.per_step_logpd = per_step_logpd;
    bool deep_outlier = false;
    for (double lp : per_step_logpd) {
        if (lp < cal.threshold) ++res.anomalous_step_count;
        if (lp < cal.confident_factor * cal.threshold) deep_outlier = true;
    }
    res.is_anomaly = res.anomalous_step_count >= 1;
    const double cutoff = cal.confident_fraction * static_cast<double>(per_step_logpd.size());
    res.is_confident = deep_outlier || static_cast<double>(res.anomalous_step_count) > cutoff;
    return res;
}

}  // namespace hecad::scoring
