#pragma once

#include <array>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "hecad/data/timeseries.hpp"
#include "hecad/nn/rng.hpp"

namespace hecad::data {

// Weekly power-demand-style series: 96 steps/day, 7 days/week. Weekdays sit
// on a high plateau, weekends on a low one, both with Gaussian noise. An
// anomalous week flips one day to the opposite plateau (weekday -> low or
// weekend -> high) and labels that day's 96 steps.
inline TimeSeries gen_univariate_weekly(std::size_t weeks, const std::set<std::size_t>& anomalous_weeks,
                                        nn::RngSeed seed) {
    if (weeks == 0) throw std::invalid_argument("gen_univariate_weekly: weeks must be > 0");
    for (std::size_t w : anomalous_weeks)
        if (w >= weeks)
            throw std::invalid_argument("gen_univariate_weekly: anomalous week index out of range");

    constexpr std::size_t kStepsPerDay = 96;
    constexpr std::size_t kDaysPerWeek = 7;
    constexpr double kHigh = 1.0;
    constexpr double kLow = 0.2;
    constexpr double kNoise = 0.03;

    auto rng = nn::make_rng(seed, 0x0ull);
    std::normal_distribution<double> noise(0.0, kNoise);

    const std::size_t steps = weeks * kDaysPerWeek * kStepsPerDay;
    TimeSeries series;
    series.values = Tensor2(steps, 1);
    series.step_labels.assign(steps, false);
    series.sample_period_s = 15.0 * 60.0;

    for (std::size_t week = 0; week < weeks; ++week) {
        const bool anomalous = anomalous_weeks.count(week) > 0;
        std::size_t flipped_day = kDaysPerWeek;  // sentinel: none
        if (anomalous) {
            // Pick the flipped day from the stream so runs stay reproducible.
            std::uniform_int_distribution<int> pick(0, 6);
            flipped_day = static_cast<std::size_t>(pick(rng));
        }
        for (std::size_t day = 0; day < kDaysPerWeek; ++day) {
            const bool weekday = day < 5;
            bool high = weekday;
            bool label = false;
            if (day == flipped_day) {
                high = !high;  // weekday low / weekend high
                label = true;
            }
            const double level = high ? kHigh : kLow;
            for (std::size_t s = 0; s < kStepsPerDay; ++s) {
                const std::size_t t = (week * kDaysPerWeek + day) * kStepsPerDay + s;
                series.values.at(t, 0) = level + noise(rng);
                series.step_labels[t] = label;
            }
        }
    }
    return series;
}

// Wearable-sensor-style 18-dim series assembled from fixed-length activity
// segments. The normal activity is a low-frequency sinusoid bank; each
// anomalous activity uses a distinct frequency/amplitude signature. Stands in
// for the real motion dataset at desk scale.
struct MultivariateSpec {
    std::size_t subjects = 1;
    std::size_t normal_segments = 8;      // per subject
    std::size_t anomalous_segments = 1;   // per subject, per anomalous activity
    std::size_t anomalous_activities = 3;
    std::size_t segment_steps = 256;
};

inline TimeSeries gen_multivariate_activity(const MultivariateSpec& spec, nn::RngSeed seed) {
    if (spec.subjects == 0 || spec.normal_segments == 0)
        throw std::invalid_argument("gen_multivariate_activity: need at least one normal segment");

    constexpr std::size_t kDims = 18;
    constexpr double kSampleRateHz = 50.0;

    auto rng = nn::make_rng(seed, 0x1ull);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);

    // activity 0 = normal; activities 1..n = anomalous with rising frequency
    // and amplitude so each signature is distinct.
    auto activity_wave = [](std::size_t activity, std::size_t dim, double t_s, double ph) {
        const double freq = activity == 0 ? 0.8 + 0.05 * static_cast<double>(dim % 6)
                                          : 2.5 + 1.5 * static_cast<double>(activity);
        const double amp = activity == 0 ? 1.0 : 1.2 + 0.4 * static_cast<double>(activity);
        return amp * std::sin(2.0 * 3.141592653589793 * freq * t_s + ph);
    };

    const std::size_t segments_per_subject =
        spec.normal_segments + spec.anomalous_segments * spec.anomalous_activities;
    const std::size_t steps = spec.subjects * segments_per_subject * spec.segment_steps;

    TimeSeries series;
    series.values = Tensor2(steps, kDims);
    series.step_labels.assign(steps, false);
    series.sample_period_s = 1.0 / kSampleRateHz;

    std::size_t t0 = 0;
    for (std::size_t subj = 0; subj < spec.subjects; ++subj) {
        // interleave: normal run first, then one block per anomalous activity
        std::vector<std::size_t> plan;
        for (std::size_t i = 0; i < spec.normal_segments; ++i) plan.push_back(0);
        for (std::size_t a = 1; a <= spec.anomalous_activities; ++a)
            for (std::size_t i = 0; i < spec.anomalous_segments; ++i) plan.push_back(a);

        for (std::size_t activity : plan) {
            std::array<double, kDims> phases{};
            for (auto& p : phases) p = phase(rng);
            for (std::size_t s = 0; s < spec.segment_steps; ++s) {
                const double t_s = static_cast<double>(s) / kSampleRateHz;
                for (std::size_t d = 0; d < kDims; ++d)
                    series.values.at(t0 + s, d) =
                        activity_wave(activity, d, t_s, phases[d]) + noise(rng);
                series.step_labels[t0 + s] = activity != 0;
            }
            t0 += spec.segment_steps;
        }
    }
    return series;
}

}  // namespace hecad::data
