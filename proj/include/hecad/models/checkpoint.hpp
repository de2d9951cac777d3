#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hecad/models/detector.hpp"

namespace hecad::models {

using json = nlohmann::json;

// Versioned JSON container: architecture descriptor + flat parameter vector +
// training metadata. Doubles are serialized with shortest round-trip
// representation, so save/load is bit-exact.
inline constexpr const char* kCheckpointFormat = "hecad-checkpoint";
inline constexpr int kCheckpointVersion = 1;

namespace detail {

inline void append(nn::Vec& flat, const nn::Vec& v) { flat.insert(flat.end(), v.begin(), v.end()); }

inline std::size_t take(const nn::Vec& flat, std::size_t off, nn::Vec& v) {
    if (off + v.size() > flat.size())
        throw std::runtime_error("checkpoint: parameter vector too short");
    std::copy(flat.begin() + off, flat.begin() + off + v.size(), v.begin());
    return off + v.size();
}

inline void append_cell(nn::Vec& flat, const nn::LstmCell& cell) {
    append(flat, cell.w_input.data);
    append(flat, cell.w_recur.data);
    append(flat, cell.bias);
    append(flat, cell.bias_recur);
}

inline std::size_t take_cell(const nn::Vec& flat, std::size_t off, nn::LstmCell& cell) {
    off = take(flat, off, cell.w_input.data);
    off = take(flat, off, cell.w_recur.data);
    off = take(flat, off, cell.bias);
    off = take(flat, off, cell.bias_recur);
    return off;
}

}  // namespace detail

inline nn::Vec detector_parameters(const TrainedDetector& det) {
    nn::Vec flat;
    if (det.is_autoencoder()) {
        flat = nn::flatten_params(det.ae().net);
    } else {
        const auto& m = det.s2s();
        detail::append_cell(flat, m.encoder_fwd);
        if (m.arch.bidirectional_encoder) detail::append_cell(flat, m.encoder_bwd);
        detail::append_cell(flat, m.decoder);
        detail::append(flat, m.projection.weights.data);
        detail::append(flat, m.projection.biases);
    }
    return flat;
}

inline void set_detector_parameters(TrainedDetector& det, const nn::Vec& flat) {
    if (det.is_autoencoder()) {
        nn::load_params(std::get<AutoencoderModel>(det.model).net, flat);
        return;
    }
    auto& m = std::get<Seq2SeqModel>(det.model);
    std::size_t off = detail::take_cell(flat, 0, m.encoder_fwd);
    if (m.arch.bidirectional_encoder) off = detail::take_cell(flat, off, m.encoder_bwd);
    off = detail::take_cell(flat, off, m.decoder);
    off = detail::take(flat, off, m.projection.weights.data);
    off = detail::take(flat, off, m.projection.biases);
    if (off != flat.size())
        throw std::runtime_error("checkpoint: parameter vector length mismatch");
}

inline json detector_to_json(const TrainedDetector& det) {
    json j;
    j["format"] = kCheckpointFormat;
    j["version"] = kCheckpointVersion;
    if (det.is_autoencoder()) {
        j["kind"] = "ae";
        j["architecture"] = {{"layer_sizes", det.ae().arch.layer_sizes}};
    } else {
        const auto& a = det.s2s().arch;
        j["kind"] = "seq2seq";
        j["architecture"] = {
            {"input_dim", a.input_dim},
            {"encoder_units", a.encoder_units},
            {"bidirectional_encoder", a.bidirectional_encoder},
            {"bias_convention", a.bias_convention == nn::BiasConvention::kDouble ? "double" : "single"},
        };
    }
    j["params"] = detector_parameters(det);
    j["training"] = {{"epochs_trained", det.epochs_trained}, {"tier", tier_name(det.tier)}};
    return j;
}

inline TrainedDetector detector_from_json(const json& j) {
    if (j.value("format", "") != kCheckpointFormat)
        throw std::runtime_error("checkpoint: unrecognized format field");
    if (j.value("version", 0) != kCheckpointVersion)
        throw std::runtime_error("checkpoint: unsupported version");

    TrainedDetector det;
    det.tier = parse_tier(j.at("training").value("tier", "iot"));
    det.epochs_trained = j.at("training").value("epochs_trained", std::size_t{0});
    const std::string kind = j.at("kind");
    nn::RngSeed zero{0};
    if (kind == "ae") {
        AeArchitecture arch;
        arch.layer_sizes = j.at("architecture").at("layer_sizes").get<std::vector<std::size_t>>();
        det.model = make_autoencoder(arch, zero);
    } else if (kind == "seq2seq") {
        Seq2SeqArchitecture arch;
        const auto& a = j.at("architecture");
        arch.input_dim = a.at("input_dim");
        arch.encoder_units = a.at("encoder_units");
        arch.bidirectional_encoder = a.at("bidirectional_encoder");
        arch.bias_convention = a.at("bias_convention") == "double" ? nn::BiasConvention::kDouble
                                                                   : nn::BiasConvention::kSingle;
        det.model = make_seq2seq(arch, zero);
    } else {
        throw std::runtime_error("checkpoint: unknown kind '" + kind + "'");
    }
    const nn::Vec params = j.at("params").get<nn::Vec>();
    if (params.size() != det.parameter_count())
        throw std::runtime_error("checkpoint: expected " + std::to_string(det.parameter_count()) +
                                 " parameters, got " + std::to_string(params.size()));
    set_detector_parameters(det, params);
    return det;
}

inline void save_detector_checkpoint(const std::string& path, const TrainedDetector& det) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_detector_checkpoint: cannot open " + path);
    out << detector_to_json(det).dump(1) << '\n';
}

inline TrainedDetector load_detector_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_detector_checkpoint: cannot open " + path);
    json j;
    in >> j;
    return detector_from_json(j);
}

}  // namespace hecad::models
