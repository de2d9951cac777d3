#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hecad/data/timeseries.hpp"

namespace hecad::data {

namespace detail {

inline bool parse_double(const std::string& token, double& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t' || *(end - 1) == '\r')) --end;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && begin != end;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace detail

// One row per time step, comma separated, `dims` value columns followed by an
// optional integer label column (0 normal / nonzero anomalous). A header line
// is detected by its first field failing numeric parse and skipped.
inline TimeSeries load_csv(const std::string& path, std::size_t dims, bool has_label_column,
                           double sample_period_s = 0.0) {
    if (dims == 0) throw std::invalid_argument("load_csv: dims must be > 0");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);

    const std::size_t expected_fields = dims + (has_label_column ? 1 : 0);
    std::vector<double> values;
    std::vector<bool> labels;
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = detail::split_csv_line(line);
        if (first_data_line) {
            double probe;
            if (!detail::parse_double(fields[0], probe)) {
                first_data_line = false;  // header line
                continue;
            }
            first_data_line = false;
        }
        if (fields.size() != expected_fields)
            throw std::runtime_error("load_csv: " + path + " line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(expected_fields) +
                                     " fields, got " + std::to_string(fields.size()));
        for (std::size_t d = 0; d < dims; ++d) {
            double v;
            if (!detail::parse_double(fields[d], v))
                throw std::runtime_error("load_csv: " + path + " line " + std::to_string(line_no) +
                                         ": non-numeric field '" + fields[d] + "'");
            values.push_back(v);
        }
        if (has_label_column) {
            double v;
            if (!detail::parse_double(fields[dims], v))
                throw std::runtime_error("load_csv: " + path + " line " + std::to_string(line_no) +
                                         ": non-numeric label '" + fields[dims] + "'");
            labels.push_back(v != 0.0);
        } else {
            labels.push_back(false);
        }
    }
    if (values.empty()) throw std::runtime_error("load_csv: " + path + " contains no data rows");

    TimeSeries series;
    const std::size_t steps = values.size() / dims;
    series.values = Tensor2(steps, dims);
    series.values.data = std::move(values);
    series.step_labels = std::move(labels);
    series.sample_period_s = sample_period_s;
    return series;
}

inline void save_csv(const std::string& path, const TimeSeries& series, bool with_labels) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open " + path);
    out.precision(17);
    for (std::size_t t = 0; t < series.steps(); ++t) {
        for (std::size_t d = 0; d < series.dims(); ++d) {
            if (d) out << ',';
            out << series.values.at(t, d);
        }
        if (with_labels) out << ',' << (series.step_labels[t] ? 1 : 0);
        out << '\n';
    }
}

}  // namespace hecad::data
