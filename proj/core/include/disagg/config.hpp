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

// Appliance / training configuration files (JSON).
//
//   {
//     "classes": [
//       {"name": "oven", "peak": 5.0, "l0_budget": 10,
//        "basis_kind": "identity", "pulse_width": 1}
//     ],
//     "fixed_rank": 1, "update_rule": "paper-kl", "max_iterations": 200, ...
//   }
//
// Every key except "classes[].name", "classes[].peak" and
// "classes[].l0_budget" is optional and falls back to the ModelConfig
// default. Unknown keys are rejected so typos do not pass silently.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "disagg/model.hpp"

namespace disagg {

ModelConfig parse_appliance_config(std::string_view json_text);
ModelConfig load_appliance_config(const std::filesystem::path& path);

std::string to_json(const ModelConfig& config, int indent = 2);

}  // namespace disagg
