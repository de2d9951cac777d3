#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hecad/data/timeseries.hpp"

namespace hecad::data {

enum class SplitPurpose { kAdTraining, kPolicyTraining, kEvaluation };

// AD training takes the first ceil(ratio * total) windows from the normal
// pool only (detectors must never see anomalies). Policy training pairs all
// anomalous windows with the normal windows AD training left behind.
// Evaluation is the full set.
inline std::vector<Window> make_splits(const std::vector<Window>& windows, SplitPurpose purpose,
                                       double ratio = 0.7) {
    if (ratio <= 0.0 || ratio > 1.0) throw std::invalid_argument("make_splits: ratio must be in (0,1]");
    if (purpose == SplitPurpose::kEvaluation) return windows;

    std::vector<const Window*> normal;
    std::vector<const Window*> anomalous;
    for (const auto& w : windows) (w.label ? anomalous : normal).push_back(&w);
    if (normal.empty()) throw std::invalid_argument("make_splits: no normal windows available");

    const auto want = static_cast<std::size_t>(
        std::ceil(ratio * static_cast<double>(windows.size())));
    const std::size_t train_count = std::min(want, normal.size());

    std::vector<Window> out;
    if (purpose == SplitPurpose::kAdTraining) {
        out.reserve(train_count);
        for (std::size_t i = 0; i < train_count; ++i) out.push_back(*normal[i]);
    } else {  // kPolicyTraining
        out.reserve(anomalous.size() + normal.size() - train_count);
        for (const Window* w : anomalous) out.push_back(*w);
        for (std::size_t i = train_count; i < normal.size(); ++i) out.push_back(*normal[i]);
    }
    return out;
}

}  // namespace hecad::data
