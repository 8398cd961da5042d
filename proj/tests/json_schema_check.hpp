#pragma once

// Minimal structural validator for the subset of JSON Schema the shipped
// output schema uses: type, required, properties, additionalProperties,
// items.

#include <json.hpp>
#include <string>

namespace schema_check {

inline bool type_matches(const nlohmann::json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "integer") return value.is_number_integer();
    if (type == "number") return value.is_number();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    return false;
}

inline bool validate(const nlohmann::json& value, const nlohmann::json& schema,
                     std::string* why = nullptr) {
    if (schema.is_boolean()) return schema.get<bool>();
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool ok = false;
        if (t.is_string()) ok = type_matches(value, t.get<std::string>());
        else if (t.is_array()) {
            for (const auto& alt : t)
                if (type_matches(value, alt.get<std::string>())) ok = true;
        }
        if (!ok) {
            if (why) *why = "type mismatch against " + t.dump();
            return false;
        }
    }
    if (value.is_object()) {
        if (schema.contains("required")) {
            for (const auto& key : schema["required"]) {
                if (!value.contains(key.get<std::string>())) {
                    if (why) *why = "missing required key " + key.dump();
                    return false;
                }
            }
        }
        const nlohmann::json props =
            schema.contains("properties") ? schema["properties"]
                                          : nlohmann::json::object();
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (props.contains(it.key())) {
                if (!validate(it.value(), props[it.key()], why)) return false;
            } else if (schema.contains("additionalProperties")) {
                if (!validate(it.value(), schema["additionalProperties"], why)) {
                    if (why && why->empty()) *why = "additional property " + it.key();
                    return false;
                }
            }
        }
    }
    if (value.is_array() && schema.contains("items")) {
        for (const auto& item : value)
            if (!validate(item, schema["items"], why)) return false;
    }
    return true;
}

}  // namespace schema_check
