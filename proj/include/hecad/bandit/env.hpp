#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hecad/bandit/context.hpp"
#include "hecad/sim/simulate.hpp"

namespace hecad::bandit {

// What the environment reports for one (input, layer) query: whether the
// layer's detector got the window right, and the simulated end-to-end delay.
struct Outcome {
    double accuracy = 0.0;  // per-window correctness in {0,1}
    double t_e2e_ms = 0.0;
};

// Replayable training environment: a fixed set of contextual states, each
// query-able at any tier.
class Env {
public:
    virtual ~Env() = default;
    virtual std::size_t size() const = 0;
    virtual const ContextualState& state(std::size_t i) const = 0;

    // One sample, one tier; the sequential trainer calls this per input.
    virtual Outcome query(std::size_t i, Tier tier) = 0;

    // All of `indices` against one tier in a single round trip; the parallel
    // trainer calls this once per action group. Must be safe to call
    // concurrently for different tiers.
    virtual std::vector<Outcome> query_group(Tier tier, const std::vector<std::size_t>& indices) = 0;
};

// In-memory (state, tier) -> outcome table. Entries may be left unset to
// model an incomplete environment; querying one is an error. An optional
// per-query overhead emulates the round trip a real deployment pays per
// request — grouped queries pay it once per group.
class TableEnv : public Env {
public:
    TableEnv() = default;
    TableEnv(TableEnv&& other) noexcept
        : states_(std::move(other.states_)),
          outcomes_(std::move(other.outcomes_)),
          overhead_ms_(other.overhead_ms_),
          query_calls_(other.query_calls_.load()),
          group_calls_(other.group_calls_.load()) {}

    std::size_t add_sample(ContextualState state) {
        states_.push_back(std::move(state));
        outcomes_.emplace_back();
        return states_.size() - 1;
    }

    void set_outcome(std::size_t i, Tier tier, Outcome outcome) {
        outcomes_.at(i)[tier_index(tier)] = outcome;
    }

    void set_query_overhead_ms(double ms) { overhead_ms_ = ms; }

    std::size_t size() const override { return states_.size(); }
    const ContextualState& state(std::size_t i) const override { return states_.at(i); }

    Outcome query(std::size_t i, Tier tier) override {
        pay_overhead();
        ++query_calls_;
        return lookup(i, tier);
    }

    std::vector<Outcome> query_group(Tier tier, const std::vector<std::size_t>& indices) override {
        pay_overhead();
        ++group_calls_;
        std::vector<Outcome> out;
        out.reserve(indices.size());
        for (std::size_t i : indices) out.push_back(lookup(i, tier));
        return out;
    }

    std::size_t query_calls() const { return query_calls_; }
    std::size_t group_calls() const { return group_calls_; }

private:
    Outcome lookup(std::size_t i, Tier tier) const {
        const auto& entry = outcomes_.at(i)[tier_index(tier)];
        if (!entry)
            throw std::runtime_error("TableEnv: no outcome for sample " + std::to_string(i) +
                                     " at tier " + tier_name(tier));
        return *entry;
    }

    void pay_overhead() const {
        if (overhead_ms_ > 0.0)
            std::this_thread::sleep_for(
                std::chrono::duration<double, std::milli>(overhead_ms_));
    }

    std::vector<ContextualState> states_;
    std::vector<std::array<std::optional<Outcome>, kNumTiers>> outcomes_;
    double overhead_ms_ = 0.0;
    std::atomic<std::size_t> query_calls_ = 0;
    std::atomic<std::size_t> group_calls_ = 0;
};

// Precomputes a TableEnv from a deployment and a labeled window set:
// correctness comes from each tier's full detection pipeline, delays from the
// tier profiles (jitter-free). Contextual states are handcrafted day
// statistics for univariate data and the IoT encoder's states for
// multivariate data; `encoded_univariate` switches the univariate side to the
// autoencoder bottleneck code.
inline TableEnv build_table_env(const sim::Deployment& deployment,
                                const std::vector<data::Window>& windows,
                                bool encoded_univariate = false) {
    TableEnv env;
    for (const auto& w : windows) {
        ContextualState state;
        if (deployment.data_type == sim::DataType::kUnivariate && !encoded_univariate)
            state = extract_handcrafted(w);
        else
            state = extract_encoded(deployment.at(Tier::kIot).detector, w);
        const std::size_t idx = env.add_sample(std::move(state));
        for (Tier tier : kAllTiers) {
            const auto result = sim::run_detection(deployment.at(tier), w);
            Outcome outcome;
            outcome.accuracy = result.is_anomaly == w.label ? 1.0 : 0.0;
            outcome.t_e2e_ms = sim::sample_delay(deployment.profile(tier), nullptr);
            env.set_outcome(idx, tier, outcome);
        }
    }
    return env;
}

}  // namespace hecad::bandit
