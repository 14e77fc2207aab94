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

#include "disagg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "disagg/error.hpp"
#include "json_util.hpp"

namespace disagg {

using nlohmann::json;

namespace {

ClassSpec parse_class(const json& j, std::size_t index) {
  const std::string where = "classes[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  detail::reject_unknown_keys(j, {"name", "peak", "l0_budget", "basis_kind", "pulse_width"}, where);
  ClassSpec spec;
  spec.name = detail::required<std::string>(j, "name", where);
  const std::string who = "class '" + spec.name + "'";
  spec.peak = detail::required<double>(j, "peak", who);
  spec.l0_budget = detail::required<int>(j, "l0_budget", who);
  if (j.contains("basis_kind")) {
    spec.basis_kind = parse_basis_kind(detail::required<std::string>(j, "basis_kind", who));
  }
  spec.pulse_width = detail::optional<int>(j, "pulse_width", spec.pulse_width, who);
  if (!(spec.peak > 0.0)) throw ConfigError(who + ": peak must be positive");
  if (spec.l0_budget < 1) throw ConfigError(who + ": l0_budget must be at least 1");
  return spec;
}

}  // namespace

ModelConfig parse_appliance_config(std::string_view json_text) {
  const json doc = detail::parse_json(json_text);
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  detail::reject_unknown_keys(doc,
                              {"classes", "fixed_rank", "update_rule", "epsilon", "max_iterations",
                               "convergence_tol", "sample_order", "class_order", "rng_seed",
                               "threads"},
                              "config");
  ModelConfig config;
  if (doc.contains("classes")) {
    const auto& classes = doc.at("classes");
    if (!classes.is_array()) throw ConfigError("'classes' must be an array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      auto spec = parse_class(classes[i], i);
      if (!names.insert(spec.name).second) {
        throw ConfigError("duplicate class name '" + spec.name + "'");
      }
      config.classes.push_back(std::move(spec));
    }
  }
  config.fixed_rank = detail::optional<int>(doc, "fixed_rank", config.fixed_rank, "config");
  if (doc.contains("update_rule")) {
    config.update_rule = parse_update_rule(detail::required<std::string>(doc, "update_rule", "config"));
  }
  config.epsilon = detail::optional<double>(doc, "epsilon", config.epsilon, "config");
  config.max_iterations =
      detail::optional<int>(doc, "max_iterations", config.max_iterations, "config");
  config.convergence_tol =
      detail::optional<double>(doc, "convergence_tol", config.convergence_tol, "config");
  if (doc.contains("sample_order")) {
    config.sample_order = parse_order(detail::required<std::string>(doc, "sample_order", "config"));
  }
  if (doc.contains("class_order")) {
    config.class_order = parse_order(detail::required<std::string>(doc, "class_order", "config"));
  }
  config.rng_seed = detail::optional<std::uint64_t>(doc, "rng_seed", config.rng_seed, "config");
  config.threads = detail::optional<int>(doc, "threads", config.threads, "config");
  validate(config);
  return config;
}

ModelConfig load_appliance_config(const std::filesystem::path& path) {
  return parse_appliance_config(detail::read_text_file(path));
}

std::string to_json(const ModelConfig& config, int indent) {
  return detail::config_to_json(config).dump(indent);
}

namespace detail {

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (auto key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

json config_to_json(const ModelConfig& config) {
  json classes = json::array();
  for (const auto& c : config.classes) {
    classes.push_back({{"name", c.name},
                       {"peak", c.peak},
                       {"l0_budget", c.l0_budget},
                       {"basis_kind", std::string(to_string(c.basis_kind))},
                       {"pulse_width", c.pulse_width}});
  }
  return json{{"classes", classes},
              {"fixed_rank", config.fixed_rank},
              {"update_rule", std::string(to_string(config.update_rule))},
              {"epsilon", config.epsilon},
              {"max_iterations", config.max_iterations},
              {"convergence_tol", config.convergence_tol},
              {"sample_order", std::string(to_string(config.sample_order))},
              {"class_order", std::string(to_string(config.class_order))},
              {"rng_seed", config.rng_seed},
              {"threads", config.threads}};
}

}  // namespace detail

}  // namespace disagg
