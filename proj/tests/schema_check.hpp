#pragma once

// Minimal JSON-Schema checker for the draft-07 subset the shipped schemas
// use: type (string or array of strings), properties, required, items, enum.
// Test-only; throws std::runtime_error with a JSON-pointer-ish location.

#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>

namespace dacsurv::testing {

inline bool matches_type(const nlohmann::json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
  if (type == "number") return value.is_number();
  throw std::runtime_error("schema uses unsupported type: " + type);
}

inline void check_schema(const nlohmann::json& schema, const nlohmann::json& value,
                         const std::string& where = "$") {
  if (schema.contains("type")) {
    const auto& type = schema["type"];
    bool ok = false;
    if (type.is_string()) {
      ok = matches_type(value, type.get<std::string>());
    } else {
      for (const auto& t : type) ok = ok || matches_type(value, t.get<std::string>());
    }
    if (!ok) throw std::runtime_error(where + ": type mismatch, got " + value.dump());
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& candidate : schema["enum"]) ok = ok || candidate == value;
    if (!ok) throw std::runtime_error(where + ": value not in enum: " + value.dump());
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>()))
          throw std::runtime_error(where + ": missing required key " +
                                   key.get<std::string>());
    if (schema.contains("properties"))
      for (auto it = schema["properties"].begin(); it != schema["properties"].end();
           ++it)
        if (value.contains(it.key()))
          check_schema(it.value(), value[it.key()], where + "." + it.key());
  }
  if (value.is_array() && schema.contains("items")) {
    std::size_t index = 0;
    for (const auto& element : value)
      check_schema(schema["items"], element, where + "[" + std::to_string(index++) + "]");
  }
}

inline nlohmann::json load_schema(const std::string& name) {
  std::ifstream in(std::string(DACSURV_SCHEMA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("cannot open schema " + name);
  return nlohmann::json::parse(in);
}

}  // namespace dacsurv::testing
