#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hecad/nn/tensor.hpp"

namespace hecad::data {

using nn::Tensor2;
using nn::Vec;

// Step-major series: values is steps x dims. step_labels[t] marks step t as
// part of a labeled anomaly.
struct TimeSeries {
    Tensor2 values;
    std::vector<bool> step_labels;
    double sample_period_s = 0.0;

    std::size_t steps() const { return values.rows; }
    std::size_t dims() const { return values.cols; }

    void validate() const {
        if (step_labels.size() != values.rows)
            throw std::invalid_argument("TimeSeries: label count must equal step count");
    }
};

struct WindowSpec {
    std::size_t length = 0;
    std::size_t stride = 0;

    // One week of 15-minute samples per window, week-aligned.
    static WindowSpec univariate_preset() { return {672, 672}; }
    // 128 steps (~2.56 s at 50 Hz) with 50% overlap.
    static WindowSpec multivariate_preset() { return {128, 64}; }
};

struct WindowOrigin {
    int series_id = 0;
    std::size_t start = 0;
};

// One standardized input sequence. label is the OR of the covered step labels.
struct Window {
    Tensor2 data;  // length x dims
    bool label = false;
    WindowOrigin origin;

    std::size_t length() const { return data.rows; }
    std::size_t dims() const { return data.cols; }
};

inline std::vector<Window> slide_windows(const TimeSeries& series, const WindowSpec& spec,
                                         int series_id = 0) {
    if (spec.length == 0 || spec.stride == 0)
        throw std::invalid_argument("slide_windows: length and stride must be > 0");
    if (series.steps() < spec.length)
        throw std::invalid_argument("slide_windows: series has " + std::to_string(series.steps()) +
                                    " steps, shorter than window length " +
                                    std::to_string(spec.length));
    series.validate();

    const std::size_t count = (series.steps() - spec.length) / spec.stride + 1;
    std::vector<Window> windows;
    windows.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t start = w * spec.stride;
        Window win;
        win.data = Tensor2(spec.length, series.dims());
        win.origin = {series_id, start};
        for (std::size_t t = 0; t < spec.length; ++t) {
            for (std::size_t d = 0; d < series.dims(); ++d)
                win.data.at(t, d) = series.values.at(start + t, d);
            if (series.step_labels[start + t]) win.label = true;
        }
        windows.push_back(std::move(win));
    }
    return windows;
}

}  // namespace hecad::data
