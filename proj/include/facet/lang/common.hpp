#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "facet/errors.hpp"
#include "facet/term.hpp"

namespace facet::lang {

using json = nlohmann::json;

/// Names in structure files may be strings or integers.
inline std::string json_name(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw StructureError("expected a name (string or integer), got " + j.dump());
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw StructureError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string require_string(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_string()) throw StructureError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::vector<std::string> string_list(const json& j, const char* what) {
  if (!j.is_array()) throw StructureError(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& x : j) out.push_back(json_name(x));
  return out;
}

/// Letters of a word; each character is one letter.
inline std::vector<std::string> letters_of(const std::string& word) {
  std::vector<std::string> out;
  for (char c : word) out.emplace_back(1, c);
  return out;
}

inline void check_letters(const std::vector<std::string>& letters) {
  std::set<std::string> seen;
  for (const auto& l : letters) {
    if (l.size() != 1 || !is_name_char(l[0])) throw Error("letters must be single name characters, got '" + l + "'");
    if (!seen.insert(l).second) throw Error("duplicate letter '" + l + "'");
  }
}

/// Variable names: x, y, z for up to three variables, else x1..xk.
inline std::vector<std::string> variable_names(std::size_t k) {
  static const char* short_names[] = {"x", "y", "z"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(k <= 3 ? short_names[i] : "x" + std::to_string(i + 1));
  return out;
}

}  // namespace facet::lang
