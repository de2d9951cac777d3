#pragma once

#include <cmath>
#include <stdexcept>

#include "hecad/data/timeseries.hpp"

namespace hecad::data {

// Per-dim standardizer fitted on the training split only; the same instance
// transforms validation/test/online data. Uses population statistics.
struct Scaler {
    Vec mean;
    Vec stddev;  // floored at 1e-12 so constant dims map to zero

    static constexpr double kStdFloor = 1e-12;
};

inline Scaler fit_scaler(const TimeSeries& train) {
    if (train.steps() == 0) throw std::invalid_argument("fit_scaler: empty series");
    const std::size_t dims = train.dims();
    const double n = static_cast<double>(train.steps());
    Scaler s;
    s.mean.assign(dims, 0.0);
    s.stddev.assign(dims, 0.0);
    for (std::size_t t = 0; t < train.steps(); ++t)
        for (std::size_t d = 0; d < dims; ++d) s.mean[d] += train.values.at(t, d);
    for (std::size_t d = 0; d < dims; ++d) s.mean[d] /= n;
    for (std::size_t t = 0; t < train.steps(); ++t)
        for (std::size_t d = 0; d < dims; ++d) {
            const double diff = train.values.at(t, d) - s.mean[d];
            s.stddev[d] += diff * diff;
        }
    for (std::size_t d = 0; d < dims; ++d)
        s.stddev[d] = std::max(std::sqrt(s.stddev[d] / n), Scaler::kStdFloor);
    return s;
}

inline TimeSeries apply_scaler(const Scaler& scaler, const TimeSeries& series) {
    if (scaler.mean.size() != series.dims())
        throw std::invalid_argument("apply_scaler: scaler has " + std::to_string(scaler.mean.size()) +
                                    " dims, series has " + std::to_string(series.dims()));
    TimeSeries out = series;
    for (std::size_t t = 0; t < out.steps(); ++t)
        for (std::size_t d = 0; d < out.dims(); ++d)
            out.values.at(t, d) = (out.values.at(t, d) - scaler.mean[d]) / scaler.stddev[d];
    return out;
}

inline TimeSeries inverse_scaler(const Scaler& scaler, const TimeSeries& series) {
    TimeSeries out = series;
    for (std::size_t t = 0; t < out.steps(); ++t)
        for (std::size_t d = 0; d < out.dims(); ++d)
            out.values.at(t, d) = out.values.at(t, d) * scaler.stddev[d] + scaler.mean[d];
    return out;
}

}  // namespace hecad::data
