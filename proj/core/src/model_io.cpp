#include "qrobust/model_io.hpp"

#include "json_detail.hpp"
#include "qrobust/errors.hpp"

#include <fstream>
#include <sstream>

namespace qrobust {

namespace detail {

Json parse_json(std::string_view text, const std::string &what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(what + " is not valid JSON: " + e.what());
    }
}

} // namespace detail

using detail::Json;
using detail::require;

namespace {

Json layout_ops_json(const CircuitLayout &layout) {
    Json ops = Json::array();
    for (const auto &op : layout.ops()) {
        if (const auto *gate = std::get_if<EncodingGate>(&op)) {
            ops.push_back({{"type", "encoding"},
                           {"qubit", gate->qubit},
                           {"axis", std::string(1, to_char(gate->axis))},
                           {"feature_index", gate->feature_index},
                           {"weight_slot", gate->weight_slot},
                           {"bias_slot", gate->bias_slot}});
        } else {
            const auto &cnot = std::get<CnotGate>(op);
            ops.push_back({{"type", "cnot"}, {"control", cnot.control}, {"target", cnot.target}});
        }
    }
    return ops;
}

ModelCheckpoint checkpoint_from(const Json &doc) {
    const auto version = require<int>(doc, "version", "");
    if (version != kModelSchemaVersion) {
        throw ConfigError("unsupported checkpoint field 'version' = " + std::to_string(version));
    }
    const auto num_qubits = require<std::size_t>(doc, "num_qubits", "");
    const auto sequence_length = require<std::size_t>(doc, "sequence_length", "");
    const auto observable_text = require<std::string>(doc, "observable", "");

    if (!doc.contains("ops") || !doc["ops"].is_array()) {
        throw ConfigError("missing required field 'ops'");
    }
    std::vector<CircuitOp> ops;
    std::size_t index = 0;
    for (const auto &entry : doc["ops"]) {
        const std::string where = "ops[" + std::to_string(index++) + "].";
        const auto type = require<std::string>(entry, "type", where);
        if (type == "encoding") {
            const auto axis_text = require<std::string>(entry, "axis", where);
            if (axis_text.size() != 1) {
                throw ConfigError("field '" + where + "axis' must be one of X, Y, Z");
            }
            ops.emplace_back(EncodingGate{require<std::size_t>(entry, "qubit", where),
                                          pauli_from_char(axis_text[0]),
                                          require<std::size_t>(entry, "feature_index", where),
                                          require<std::size_t>(entry, "weight_slot", where),
                                          require<std::size_t>(entry, "bias_slot", where)});
        } else if (type == "cnot") {
            ops.emplace_back(CnotGate{require<std::size_t>(entry, "control", where),
                                      require<std::size_t>(entry, "target", where)});
        } else {
            throw ConfigError("field '" + where + "type' has unknown value '" + type + "'");
        }
    }

    CircuitLayout layout(num_qubits, sequence_length, std::move(ops),
                         PauliStringObservable::parse(observable_text));
    ModelParams params;
    params.weights = require<std::vector<double>>(doc, "weights", "");
    params.biases = require<std::vector<double>>(doc, "biases", "");
    params.encoding_trainable = require<bool>(doc, "encoding_trainable", "");
    check_params(layout, params);
    return ModelCheckpoint{std::move(layout), std::move(params)};
}

} // namespace

namespace detail {

Json checkpoint_json(const CircuitLayout &layout, const ModelParams &params) {
    check_params(layout, params);
    Json doc;
    doc["version"] = kModelSchemaVersion;
    doc["num_qubits"] = layout.num_qubits();
    doc["sequence_length"] = layout.sequence_length();
    doc["observable"] = layout.observable().to_string();
    doc["ops"] = layout_ops_json(layout);
    doc["weights"] = params.weights;
    doc["biases"] = params.biases;
    doc["encoding_trainable"] = params.encoding_trainable;
    return doc;
}

} // namespace detail

std::string checkpoint_to_json(const CircuitLayout &layout, const ModelParams &params) {
    return detail::checkpoint_json(layout, params).dump(2);
}

ModelCheckpoint checkpoint_from_json(std::string_view text) {
    const Json doc = detail::parse_json(text, "checkpoint");
    if (doc.is_object() && doc.contains("model") && !doc.contains("ops")) {
        return checkpoint_from(doc["model"]);
    }
    return checkpoint_from(doc);
}

void save_checkpoint(const std::filesystem::path &path, const CircuitLayout &layout,
                     const ModelParams &params) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write checkpoint '" + path.string() + "'");
    }
    out << checkpoint_to_json(layout, params) << '\n';
}

ModelCheckpoint load_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read checkpoint '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return checkpoint_from_json(buffer.str());
}

} // namespace qrobust
