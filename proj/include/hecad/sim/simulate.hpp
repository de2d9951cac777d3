#pragma once

#include <functional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "hecad/bandit/reward.hpp"
#include "hecad/scoring/metrics.hpp"
#include "hecad/sim/deployment.hpp"

namespace hecad::sim {

// Logical clock; monotone, advanced by each dispatch.
struct SimClock {
    double now_ms = 0.0;

    void advance(double ms) {
        if (ms < 0.0) throw std::invalid_argument("SimClock: cannot advance by a negative amount");
        now_ms += ms;
    }
};

// Outcome of one detection dispatched to one layer: the tier's decision and
// the end-to-end time from input generation to result reception.
struct DispatchRecord {
    data::WindowOrigin origin;
    Tier tier = Tier::kIot;
    scoring::DetectionResult result;
    bool label = false;
    double t_e2e_ms = 0.0;
};

// t_e2e = net round trip + payload + execution of the chosen tier. Jitter,
// when configured, perturbs the execution component only.
inline double sample_delay(const LayerProfile& profile, std::mt19937_64* jitter_rng) {
    double exec = profile.exec_ms;
    if (profile.jitter_frac > 0.0 && jitter_rng != nullptr) {
        std::uniform_real_distribution<double> jitter(-profile.jitter_frac, profile.jitter_frac);
        exec *= 1.0 + jitter(*jitter_rng);
    }
    return profile.net_rtt_ms + profile.payload_ms + exec;
}

inline DispatchRecord simulate_e2e(const Deployment& deployment, Tier tier,
                                   const data::Window& window, SimClock& clock,
                                   std::mt19937_64* jitter_rng = nullptr) {
    DispatchRecord rec;
    rec.origin = window.origin;
    rec.tier = tier;
    rec.label = window.label;
    rec.result = run_detection(deployment.at(tier), window);
    rec.t_e2e_ms = sample_delay(deployment.profile(tier), jitter_rng);
    clock.advance(rec.t_e2e_ms);
    return rec;
}

struct ReplayReport {
    std::size_t window_count = 0;
    double mean_delay_ms = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    double mean_reward = 0.0;
};

// Dispatches every window through `selector` and aggregates the run. The
// reward of each dispatch is its per-window correctness minus the delay cost.
inline ReplayReport replay(const Deployment& deployment, const std::vector<data::Window>& windows,
                           const std::function<Tier(const data::Window&)>& selector,
                           SimClock& clock, std::vector<DispatchRecord>* records_out = nullptr,
                           double cost_alpha = 0.0005) {
    if (windows.empty()) throw std::invalid_argument("replay: empty window set");
    std::vector<bool> predictions, truth;
    predictions.reserve(windows.size());
    truth.reserve(windows.size());
    ReplayReport report;
    report.window_count = windows.size();
    for (const auto& w : windows) {
        DispatchRecord rec = simulate_e2e(deployment, selector(w), w, clock);
        predictions.push_back(rec.result.is_anomaly);
        truth.push_back(rec.label);
        report.mean_delay_ms += rec.t_e2e_ms;
        const double correct = rec.result.is_anomaly == rec.label ? 1.0 : 0.0;
        report.mean_reward += bandit::reward(correct, bandit::cost(rec.t_e2e_ms, cost_alpha));
        if (records_out) records_out->push_back(std::move(rec));
    }
    const double n = static_cast<double>(windows.size());
    report.mean_delay_ms /= n;
    report.mean_reward /= n;
    const auto metrics = scoring::score_run(predictions, truth);
    report.accuracy = metrics.accuracy;
    report.f1 = metrics.f1;
    return report;
}

inline void write_dispatch_csv(std::ostream& out, const std::vector<DispatchRecord>& records) {
    out << "series_id,start,tier,label,prediction,t_e2e_ms\n";
    for (const auto& r : records) {
        out << r.origin.series_id << ',' << r.origin.start << ',' << tier_name(r.tier) << ','
            << (r.label ? 1 : 0) << ',' << (r.result.is_anomaly ? 1 : 0) << ',' << r.t_e2e_ms
            << '\n';
    }
}

}  // namespace hecad::sim
