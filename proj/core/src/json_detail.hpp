#pragma once

// Internal helpers shared by the JSON-producing translation units.

#include "qrobust/errors.hpp"
#include "qrobust/model.hpp"

#include <json.hpp>

#include <string>

namespace qrobust::detail {

using Json = nlohmann::ordered_json;

/// Typed lookup of a required key, naming `where.key` on failure.
template <typename T> T require(const Json &obj, const char *key, const std::string &where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ConfigError("missing required field '" + where + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw ConfigError("field '" + where + key + "' has the wrong type");
    }
}

Json parse_json(std::string_view text, const std::string &what);

Json checkpoint_json(const CircuitLayout &layout, const ModelParams &params);

} // namespace qrobust::detail
