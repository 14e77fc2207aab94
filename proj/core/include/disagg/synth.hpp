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

// Synthetic household data with known ground truth.
//
// Each day is a fixed profile (scaled by a per-day factor) plus, for every
// appliance class, rectangular ON pulses of height `peak` covering exactly
// `on_intervals` intervals, plus Gaussian noise clamped at zero. The exact
// generating model is returned alongside the data.
//
// Spec files are JSON:
//
//   {
//     "rows": 1440, "samples": 15, "noise_sigma": 0.01, "seed": 7,
//     "start_date": "2019-04-01", "weekdays_only": true,
//     "fixed_profile": {"kind": "sinusoidal-day", "base": 0.3, "amplitude": 0.6},
//     "classes": [
//       {"name": "oven", "peak": 5.0, "l0_budget": 10, "on_intervals": 10,
//        "pulse_width": 5, "distribution": "clustered",
//        "cluster_center_hour": 18.0, "cluster_spread_hours": 1.0}
//     ]
//   }

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "disagg/csv.hpp"
#include "disagg/model.hpp"

namespace disagg {

enum class ProfileKind { constant, sinusoidal_day, explicit_values };
enum class OnTimeDistribution { uniform, clustered };

struct FixedProfileSpec {
  ProfileKind kind = ProfileKind::sinusoidal_day;
  double base = 0.3;
  double amplitude = 0.6;
  double peak_hour = 19.0;     // centre of the diurnal hump
  std::vector<double> values;  // explicit_values only, length rows
};

struct SynthClassSpec {
  std::string name;
  double peak = 1.0;
  int l0_budget = 1;
  int on_intervals = 1;  // ON intervals per active day, <= l0_budget
  int pulse_width = 1;   // the last pulse of a day may be shorter
  OnTimeDistribution distribution = OnTimeDistribution::uniform;
  double cluster_center_hour = 12.0;
  double cluster_spread_hours = 2.0;
  double active_probability = 1.0;  // chance the appliance runs on a given day
};

struct SynthSpec {
  Index rows = 1440;
  Index samples = 15;
  FixedProfileSpec fixed_profile;
  double day_scale_jitter = 0.1;  // per-day fixed-load factor in [1 - j, 1 + j]
  std::vector<SynthClassSpec> classes;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::string start_date = "2019-04-01";
  bool weekdays_only = true;
  // When set, no two classes are ON in the same interval of a day.
  bool exclusive_slots = true;
  // OFF intervals required on both sides of every pulse (within a class, or
  // across classes when exclusive_slots is set).
  int min_gap = 0;
};

struct SynthResult {
  EnergyDataset dataset;
  ApplianceGroundTruth truth;
  DisaggregationModel model;  // identity bases; weights mark ON intervals
};

// Throws ConfigError on an invalid spec or when pulses cannot be placed.
void validate(const SynthSpec& spec);
SynthResult generate(const SynthSpec& spec);

SynthSpec parse_synth_spec(std::string_view json_text);
SynthSpec load_synth_spec(const std::filesystem::path& path);

// Matching training config: one identity-basis class per synthetic class.
ModelConfig model_config_for(const SynthSpec& spec);

// 1440 x 15 with the four reference classes, pulses well apart.
SynthSpec reference_household_spec(double noise_sigma, std::uint64_t seed);

}  // namespace disagg
