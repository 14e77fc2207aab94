// Copyright 2026 The Disagg Authors.
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

// Internal JSON helpers shared by the config, synth and export readers.

#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "disagg/error.hpp"
#include "disagg/model.hpp"

namespace disagg::detail {

nlohmann::json parse_json(std::string_view text);
std::string read_text_file(const std::filesystem::path& path);
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                         const std::string& where);
nlohmann::json config_to_json(const ModelConfig& config);

template <typename T>
T required(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError(where + ": '" + key + "' must be a string");
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(where + ": '" + key + "' must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
    if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned() &&
        v.template get<long long>() < 0) {
      throw ConfigError(where + ": '" + key + "' must be non-negative");
    }
  } else {
    if (!v.is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  }
  return v.template get<T>();
}

template <typename T>
T optional(const nlohmann::json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? required<T>(j, key, where) : fallback;
}

}  // namespace disagg::detail
