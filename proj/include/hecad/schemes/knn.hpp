#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hecad/bandit/context.hpp"
#include "hecad/sim/deployment.hpp"

namespace hecad::schemes {

// Euclidean-distance kNN with deterministic tie handling: candidate
// neighbors are ordered by (distance, insertion index); vote ties go to the
// class with the smaller mean distance, then to the lower label.
struct KnnClassifier {
    std::size_t k = 1;
    std::vector<nn::Vec> features;
    std::vector<int> labels;
};

inline KnnClassifier knn_train(std::vector<nn::Vec> features, std::vector<int> labels,
                               std::size_t k) {
    if (features.empty()) throw std::invalid_argument("knn_train: empty training set");
    if (features.size() != labels.size())
        throw std::invalid_argument("knn_train: feature/label count mismatch");
    if (k == 0 || k > features.size())
        throw std::invalid_argument("knn_train: k=" + std::to_string(k) +
                                    " out of range for training size " +
                                    std::to_string(features.size()));
    return {k, std::move(features), std::move(labels)};
}

inline int knn_predict(const KnnClassifier& model, const nn::Vec& feature) {
    struct Neighbor {
        double dist;
        std::size_t idx;
    };
    std::vector<Neighbor> neighbors;
    neighbors.reserve(model.features.size());
    for (std::size_t i = 0; i < model.features.size(); ++i) {
        const auto& f = model.features[i];
        nn::require_dim(f.size(), feature.size(), "knn_predict: feature");
        double d2 = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double diff = f[j] - feature[j];
            d2 += diff * diff;
        }
        neighbors.push_back({std::sqrt(d2), i});
    }
    std::partial_sort(neighbors.begin(), neighbors.begin() + model.k, neighbors.end(),
                      [](const Neighbor& a, const Neighbor& b) {
                          return a.dist != b.dist ? a.dist < b.dist : a.idx < b.idx;
                      });

    struct Tally {
        std::size_t votes = 0;
        double dist_sum = 0.0;
    };
    std::vector<std::pair<int, Tally>> tallies;
    for (std::size_t n = 0; n < model.k; ++n) {
        const int label = model.labels[neighbors[n].idx];
        auto it = std::find_if(tallies.begin(), tallies.end(),
                               [label](const auto& t) { return t.first == label; });
        if (it == tallies.end()) it = tallies.insert(tallies.end(), {label, Tally{}});
        ++it->second.votes;
        it->second.dist_sum += neighbors[n].dist;
    }

    int best_label = tallies.front().first;
    Tally best = tallies.front().second;
    for (std::size_t t = 1; t < tallies.size(); ++t) {
        const auto& [label, tally] = tallies[t];
        const double mean = tally.dist_sum / static_cast<double>(tally.votes);
        const double best_mean = best.dist_sum / static_cast<double>(best.votes);
        const bool wins = tally.votes > best.votes ||
                          (tally.votes == best.votes &&
                           (mean < best_mean || (mean == best_mean && label < best_label)));
        if (wins) {
            best_label = label;
            best = tally;
        }
    }
    return best_label;
}

// Per-window training data for the two kNN schemes, derived by probing every
// tier: the single-classifier label is the lowest tier that detects the
// window correctly (cloud when none does); the per-tier stop label is 1 iff
// that tier detects correctly.
struct KnnTrainingData {
    std::vector<nn::Vec> features;
    std::vector<int> single_labels;                       // tier index 0..2
    std::array<std::vector<int>, kNumTiers> stop_labels;  // 1 = stop here
};

inline KnnTrainingData build_knn_training_data(const sim::Deployment& deployment,
                                               const std::vector<data::Window>& windows,
                                               bool encoded_univariate = false) {
    KnnTrainingData out;
    for (const auto& w : windows) {
        bandit::ContextualState state;
        if (deployment.data_type == sim::DataType::kUnivariate && !encoded_univariate)
            state = bandit::extract_handcrafted(w);
        else
            state = bandit::extract_encoded(deployment.at(Tier::kIot).detector, w);
        out.features.push_back(std::move(state.vector));

        int single = static_cast<int>(tier_index(Tier::kCloud));  // fallback
        bool found = false;
        for (Tier tier : kAllTiers) {
            const auto result = sim::run_detection(deployment.at(tier), w);
            const bool correct = result.is_anomaly == w.label;
            out.stop_labels[tier_index(tier)].push_back(correct ? 1 : 0);
            if (correct && !found) {
                single = static_cast<int>(tier_index(tier));
                found = true;
            }
        }
        out.single_labels.push_back(single);
    }
    return out;
}

inline std::size_t default_knn_k(sim::DataType data_type) {
    return data_type == sim::DataType::kUnivariate ? 4 : 3;
}

}  // namespace hecad::schemes
