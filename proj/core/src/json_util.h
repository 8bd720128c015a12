// Copyright 2026 The gnnsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GNNSIM_SRC_JSON_UTIL_H_
#define GNNSIM_SRC_JSON_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include "gnnsim/error.h"
#include "json.hpp"

namespace gnnsim::detail {

using Json = nlohmann::ordered_json;

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + end, '\n');
    throw ParseError(static_cast<std::size_t>(line), e.what());
  }
}

inline void require_object(const Json& j, std::string_view where) {
  if (!j.is_object()) {
    throw ConfigError(std::string(where) + ": expected a JSON object");
  }
}

// Rejects keys outside `allowed`.
inline void check_keys(const Json& j, std::initializer_list<std::string_view> allowed,
                       std::string_view where) {
  require_object(j, where);
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

inline const Json& field(const Json& j, std::string_view key, std::string_view where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(std::string(where) + ": missing key '" + std::string(key) + "'");
  }
  return *it;
}

// Typed read with a readable error instead of nlohmann's type_error.
template <typename T>
T get_as(const Json& j, std::string_view key, std::string_view where) {
  const Json& v = field(j, key, where);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ConfigError("");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw ConfigError(std::string(where) + ": key '" + std::string(key) +
                      "' has the wrong type");
  }
}

template <typename T>
T get_or(const Json& j, std::string_view key, T fallback, std::string_view where) {
  return j.contains(key) ? get_as<T>(j, key, where) : fallback;
}

}  // namespace gnnsim::detail

#endif  // GNNSIM_SRC_JSON_UTIL_H_
