#pragma once

// Checks a JSON document against the subset of JSON Schema that
// schema/report.json uses: $ref, type, const, enum, required, properties,
// additionalProperties:false, items, oneOf, minimum.

#include <string>
#include <vector>

#include "json.hpp"

namespace minischema {

using nlohmann::json;

inline bool type_matches(const json& inst, const std::string& t) {
  if (t == "object") return inst.is_object();
  if (t == "array") return inst.is_array();
  if (t == "string") return inst.is_string();
  if (t == "boolean") return inst.is_boolean();
  if (t == "integer") return inst.is_number_integer();
  if (t == "number") return inst.is_number();
  if (t == "null") return inst.is_null();
  return false;
}

inline void check(const json& schema, const json& inst, const json& root,
                  const std::string& path, std::vector<std::string>& errs) {
  if (schema.contains("$ref")) {
    const std::string ref = schema["$ref"].get<std::string>();
    if (ref.rfind("#", 0) != 0) {
      errs.push_back(path + ": unsupported $ref " + ref);
      return;
    }
    check(root.at(json::json_pointer(ref.substr(1))), inst, root, path, errs);
    return;
  }
  if (schema.contains("oneOf")) {
    int hits = 0;
    for (const auto& alt : schema["oneOf"]) {
      std::vector<std::string> scratch;
      check(alt, inst, root, path, scratch);
      if (scratch.empty()) ++hits;
    }
    if (hits != 1)
      errs.push_back(path + ": " + std::to_string(hits) +
                     " oneOf alternatives match, need exactly 1");
    return;
  }
  if (schema.contains("const") && inst != schema["const"]) {
    errs.push_back(path + ": expected " + schema["const"].dump() + ", got " +
                   inst.dump());
    return;
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& v : schema["enum"]) found = found || inst == v;
    if (!found) {
      errs.push_back(path + ": " + inst.dump() + " not in " +
                     schema["enum"].dump());
      return;
    }
  }
  if (schema.contains("type") &&
      !type_matches(inst, schema["type"].get<std::string>())) {
    errs.push_back(path + ": expected " + schema["type"].get<std::string>() +
                   ", got " + inst.dump());
    return;
  }
  if (schema.contains("minimum") && inst.is_number() &&
      inst.get<double>() < schema["minimum"].get<double>()) {
    errs.push_back(path + ": " + inst.dump() + " below minimum " +
                   schema["minimum"].dump());
  }
  if (inst.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!inst.contains(key.get<std::string>()))
          errs.push_back(path + ": missing " + key.get<std::string>());
    const json props =
        schema.contains("properties") ? schema["properties"] : json::object();
    for (const auto& [key, val] : inst.items()) {
      if (props.contains(key)) {
        check(props[key], val, root, path + "/" + key, errs);
      } else if (schema.contains("additionalProperties") &&
                 schema["additionalProperties"] == false) {
        errs.push_back(path + ": unexpected key " + key);
      }
    }
  }
  if (inst.is_array() && schema.contains("items")) {
    int i = 0;
    for (const auto& el : inst) {
      check(schema["items"], el, root, path + "/" + std::to_string(i), errs);
      ++i;
    }
  }
}

inline std::vector<std::string> validate(const json& schema, const json& inst) {
  std::vector<std::string> errs;
  check(schema, inst, schema, "", errs);
  return errs;
}

}  // namespace minischema
