#pragma once

#include <stdexcept>
#include <vector>

namespace hecad::scoring {

// Confusion-matrix metrics with anomaly as the positive class. f1 is defined
// as 0 when precision + recall degenerates to 0.
struct ConfusionMetrics {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

inline ConfusionMetrics score_run(const std::vector<bool>& predictions,
                                  const std::vector<bool>& truth) {
    if (predictions.size() != truth.size())
        throw std::invalid_argument("score_run: " + std::to_string(predictions.size()) +
                                    " predictions vs " + std::to_string(truth.size()) + " labels");
    if (predictions.empty()) throw std::invalid_argument("score_run: empty input");

    ConfusionMetrics m;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (truth[i]) {
            predictions[i] ? ++m.tp : ++m.fn;
        } else {
            predictions[i] ? ++m.fp : ++m.tn;
        }
    }
    const double total = static_cast<double>(predictions.size());
    m.accuracy = static_cast<double>(m.tp + m.tn) / total;
    m.precision = (m.tp + m.fp) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall > 0.0)
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

}  // namespace hecad::scoring
