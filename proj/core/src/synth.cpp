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

#include "disagg/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "disagg/error.hpp"
#include "json_util.hpp"

namespace disagg {

using nlohmann::json;

namespace {

constexpr int kMaxPlacementAttempts = 10000;

std::vector<double> fixed_profile(const SynthSpec& spec) {
  const auto rows = static_cast<std::size_t>(spec.rows);
  const auto& p = spec.fixed_profile;
  std::vector<double> out(rows, p.base);
  switch (p.kind) {
    case ProfileKind::constant:
      break;
    case ProfileKind::sinusoidal_day:
      for (std::size_t d = 0; d < rows; ++d) {
        const double hour = 24.0 * static_cast<double>(d) / static_cast<double>(rows);
        const double phase = 2.0 * std::numbers::pi * (hour - p.peak_hour) / 24.0;
        out[d] = p.base + p.amplitude * 0.5 * (1.0 + std::cos(phase));
      }
      break;
    case ProfileKind::explicit_values:
      out = p.values;
      break;
  }
  return out;
}

std::vector<int> pulse_widths(const SynthClassSpec& c) {
  std::vector<int> widths(static_cast<std::size_t>(c.on_intervals / c.pulse_width), c.pulse_width);
  if (c.on_intervals % c.pulse_width != 0) widths.push_back(c.on_intervals % c.pulse_width);
  return widths;
}

std::vector<std::string> day_labels(const SynthSpec& spec) {
  using namespace std::chrono;
  const auto start = parse_date(spec.start_date);
  if (!start) throw ConfigError("start_date '" + spec.start_date + "' is not an ISO date");
  std::vector<std::string> labels;
  sys_days day{*start};
  while (static_cast<Index>(labels.size()) < spec.samples) {
    const year_month_day ymd{day};
    if (!spec.weekdays_only || !is_weekend(ymd)) labels.push_back(format_date(ymd));
    day += days{1};
  }
  return labels;
}

ProfileKind parse_profile_kind(const std::string& s) {
  if (s == "constant") return ProfileKind::constant;
  if (s == "sinusoidal-day") return ProfileKind::sinusoidal_day;
  if (s == "explicit") return ProfileKind::explicit_values;
  throw ConfigError("unknown fixed_profile kind '" + s + "'");
}

OnTimeDistribution parse_distribution(const std::string& s) {
  if (s == "uniform") return OnTimeDistribution::uniform;
  if (s == "clustered") return OnTimeDistribution::clustered;
  throw ConfigError("unknown distribution '" + s + "'");
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.rows < 1 || 1440 % spec.rows != 0) {
    throw ConfigError("rows must divide 1440, got " + std::to_string(spec.rows));
  }
  if (spec.samples < 1) throw ConfigError("samples must be at least 1");
  if (!(spec.noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be non-negative");
  if (!(spec.day_scale_jitter >= 0.0) || spec.day_scale_jitter >= 1.0) {
    throw ConfigError("day_scale_jitter must lie in [0, 1)");
  }
  if (spec.min_gap < 0) throw ConfigError("min_gap must be non-negative");
  if (!parse_date(spec.start_date)) {
    throw ConfigError("start_date '" + spec.start_date + "' is not an ISO date");
  }
  const auto& fp = spec.fixed_profile;
  if (fp.kind == ProfileKind::explicit_values) {
    if (static_cast<Index>(fp.values.size()) != spec.rows) {
      throw ConfigError("explicit fixed_profile needs " + std::to_string(spec.rows) + " values");
    }
    for (double v : fp.values) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("fixed_profile values must be >= 0");
    }
  } else if (!(fp.base >= 0.0) || !(fp.amplitude >= 0.0)) {
    throw ConfigError("fixed_profile base and amplitude must be >= 0");
  }

  std::set<std::string> names;
  Index exclusive_demand = 0;
  for (const auto& c : spec.classes) {
    const std::string who = "class '" + c.name + "'";
    if (c.name.empty()) throw ConfigError("class name must not be empty");
    if (!names.insert(c.name).second) throw ConfigError("duplicate class name '" + c.name + "'");
    if (!(c.peak > 0.0) || !std::isfinite(c.peak)) throw ConfigError(who + ": peak must be positive");
    if (c.l0_budget < 1) throw ConfigError(who + ": l0_budget must be at least 1");
    if (c.on_intervals < 0 || c.on_intervals > c.l0_budget) {
      throw ConfigError(who + ": on_intervals must lie in [0, l0_budget]");
    }
    if (c.pulse_width < 1) throw ConfigError(who + ": pulse_width must be at least 1");
    if (!(c.active_probability >= 0.0 && c.active_probability <= 1.0)) {
      throw ConfigError(who + ": active_probability must lie in [0, 1]");
    }
    if (!(c.cluster_spread_hours > 0.0)) throw ConfigError(who + ": cluster_spread_hours must be > 0");
    const auto pulses = static_cast<Index>(pulse_widths(c).size());
    const Index demand = c.on_intervals + pulses * spec.min_gap;
    if (demand > spec.rows) {
      throw ConfigError(who + ": " + std::to_string(c.on_intervals) +
                        " ON intervals do not fit in a day of " + std::to_string(spec.rows));
    }
    exclusive_demand += demand;
  }
  if (spec.exclusive_slots && exclusive_demand > spec.rows) {
    throw ConfigError("pulses of all classes do not fit in a day of " + std::to_string(spec.rows) +
                      " intervals");
  }
}

SynthResult generate(const SynthSpec& spec) {
  validate(spec);
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const Index rows = spec.rows;
  const Index samples = spec.samples;
  SynthResult result;
  auto& model = result.model;

  // Fixed load: rank one, basis = normalized profile, weight = norm * day factor.
  const auto profile = fixed_profile(spec);
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(profile.data(), rows);
  const double norm = w.norm();
  model.fixed.basis.resize(rows, 1);
  model.fixed.weights.resize(1, samples);
  if (norm > 0.0) {
    model.fixed.basis.col(0) = w / norm;
  } else {
    model.fixed.basis.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(rows)));
  }
  for (Index n = 0; n < samples; ++n) {
    const double factor = 1.0 + spec.day_scale_jitter * (2.0 * unit(rng) - 1.0);
    model.fixed.weights(0, n) = norm * factor;
  }

  for (const auto& c : spec.classes) {
    model.shiftable.push_back(
        make_class(ClassSpec{c.name, c.peak, c.l0_budget, BasisKind::identity, 1}, rows, samples));
  }

  const double intervals_per_hour = static_cast<double>(rows) / 24.0;
  std::vector<int> owner(static_cast<std::size_t>(rows));
  for (Index n = 0; n < samples; ++n) {
    std::fill(owner.begin(), owner.end(), -1);
    for (std::size_t j = 0; j < spec.classes.size(); ++j) {
      const auto& c = spec.classes[j];
      if (unit(rng) >= c.active_probability) continue;
      std::normal_distribution<double> cluster(c.cluster_center_hour * intervals_per_hour,
                                               c.cluster_spread_hours * intervals_per_hour);
      for (int width : pulse_widths(c)) {
        const Index last_start = rows - width;
        std::uniform_int_distribution<Index> anywhere(0, last_start);
        bool placed = false;
        for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
          Index start = 0;
          if (c.distribution == OnTimeDistribution::uniform) {
            start = anywhere(rng);
          } else {
            const double s = std::round(cluster(rng) - 0.5 * width);
            if (s < 0.0 || s > static_cast<double>(last_start)) continue;
            start = static_cast<Index>(s);
          }
          const Index lo = std::max<Index>(0, start - spec.min_gap);
          const Index hi = std::min<Index>(rows, start + width + spec.min_gap);
          bool free = true;
          for (Index d = lo; d < hi && free; ++d) {
            const int o = owner[static_cast<std::size_t>(d)];
            free = o < 0 || (!spec.exclusive_slots && o != static_cast<int>(j));
          }
          if (!free) continue;
          for (Index d = start; d < start + width; ++d) {
            // Non-exclusive overlap keeps the first owner for gap checks only.
            if (owner[static_cast<std::size_t>(d)] < 0) owner[static_cast<std::size_t>(d)] = static_cast<int>(j);
            model.shiftable[j].weights(d, n) = 1;
          }
          placed = true;
        }
        if (!placed) {
          throw ConfigError("class '" + c.name + "': cannot place a pulse of width " +
                            std::to_string(width) + " on day " + std::to_string(n));
        }
      }
    }
  }

  // Non-exclusive mode can stack pulses of one class over another's slot but
  // never within a class, so each class keeps its exact ON count.
  auto& ds = result.dataset;
  ds.values = reconstruct(model);
  if (spec.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (Index n = 0; n < samples; ++n) {
      for (Index d = 0; d < rows; ++d) ds.values(d, n) = std::max(0.0, ds.values(d, n) + noise(rng));
    }
  }
  ds.interval_minutes = static_cast<int>(1440 / rows);
  ds.day_labels = day_labels(spec);

  for (const auto& load : model.shiftable) {
    result.truth.names.push_back(load.name);
    result.truth.usage.push_back(class_contribution(load));
  }
  return result;
}

SynthSpec parse_synth_spec(std::string_view json_text) {
  const json doc = detail::parse_json(json_text);
  if (!doc.is_object()) throw ConfigError("synth spec must be a JSON object");
  const std::string where = "synth spec";
  detail::reject_unknown_keys(doc,
                              {"rows", "samples", "fixed_profile", "day_scale_jitter", "classes",
                               "noise_sigma", "seed", "start_date", "weekdays_only",
                               "exclusive_slots", "min_gap"},
                              where);
  SynthSpec spec;
  spec.rows = detail::optional<Index>(doc, "rows", spec.rows, where);
  spec.samples = detail::optional<Index>(doc, "samples", spec.samples, where);
  spec.day_scale_jitter = detail::optional<double>(doc, "day_scale_jitter", spec.day_scale_jitter, where);
  spec.noise_sigma = detail::optional<double>(doc, "noise_sigma", spec.noise_sigma, where);
  spec.seed = detail::optional<std::uint64_t>(doc, "seed", spec.seed, where);
  spec.start_date = detail::optional<std::string>(doc, "start_date", spec.start_date, where);
  spec.weekdays_only = detail::optional<bool>(doc, "weekdays_only", spec.weekdays_only, where);
  spec.exclusive_slots = detail::optional<bool>(doc, "exclusive_slots", spec.exclusive_slots, where);
  spec.min_gap = detail::optional<int>(doc, "min_gap", spec.min_gap, where);

  if (doc.contains("fixed_profile")) {
    const auto& fp = doc.at("fixed_profile");
    const std::string fw = "fixed_profile";
    if (!fp.is_object()) throw ConfigError("fixed_profile must be an object");
    detail::reject_unknown_keys(fp, {"kind", "base", "amplitude", "peak_hour", "values"}, fw);
    if (fp.contains("kind")) spec.fixed_profile.kind = parse_profile_kind(detail::required<std::string>(fp, "kind", fw));
    spec.fixed_profile.base = detail::optional<double>(fp, "base", spec.fixed_profile.base, fw);
    spec.fixed_profile.amplitude = detail::optional<double>(fp, "amplitude", spec.fixed_profile.amplitude, fw);
    spec.fixed_profile.peak_hour = detail::optional<double>(fp, "peak_hour", spec.fixed_profile.peak_hour, fw);
    if (fp.contains("values")) {
      if (!fp.at("values").is_array()) throw ConfigError("fixed_profile.values must be an array");
      for (const auto& v : fp.at("values")) {
        if (!v.is_number()) throw ConfigError("fixed_profile.values must be numbers");
        spec.fixed_profile.values.push_back(v.get<double>());
      }
    }
  }

  if (doc.contains("classes")) {
    const auto& classes = doc.at("classes");
    if (!classes.is_array()) throw ConfigError("'classes' must be an array");
    for (std::size_t i = 0; i < classes.size(); ++i) {
      const auto& c = classes[i];
      std::string cw = "classes[" + std::to_string(i) + "]";
      if (!c.is_object()) throw ConfigError(cw + " must be an object");
      detail::reject_unknown_keys(c,
                                  {"name", "peak", "l0_budget", "on_intervals", "pulse_width",
                                   "distribution", "cluster_center_hour", "cluster_spread_hours",
                                   "active_probability"},
                                  cw);
      SynthClassSpec s;
      s.name = detail::required<std::string>(c, "name", cw);
      cw = "class '" + s.name + "'";
      s.peak = detail::required<double>(c, "peak", cw);
      s.l0_budget = detail::required<int>(c, "l0_budget", cw);
      s.on_intervals = detail::optional<int>(c, "on_intervals", s.l0_budget, cw);
      s.pulse_width = detail::optional<int>(c, "pulse_width", s.pulse_width, cw);
      if (c.contains("distribution")) s.distribution = parse_distribution(detail::required<std::string>(c, "distribution", cw));
      s.cluster_center_hour = detail::optional<double>(c, "cluster_center_hour", s.cluster_center_hour, cw);
      s.cluster_spread_hours = detail::optional<double>(c, "cluster_spread_hours", s.cluster_spread_hours, cw);
      s.active_probability = detail::optional<double>(c, "active_probability", s.active_probability, cw);
      spec.classes.push_back(std::move(s));
    }
  }
  validate(spec);
  return spec;
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  return parse_synth_spec(detail::read_text_file(path));
}

ModelConfig model_config_for(const SynthSpec& spec) {
  ModelConfig config;
  for (const auto& c : spec.classes) {
    config.classes.push_back(ClassSpec{c.name, c.peak, c.l0_budget, BasisKind::identity, 1});
  }
  return config;
}

SynthSpec reference_household_spec(double noise_sigma, std::uint64_t seed) {
  SynthSpec spec;
  spec.rows = 1440;
  spec.samples = 15;
  spec.noise_sigma = noise_sigma;
  spec.seed = seed;
  spec.min_gap = 5;
  spec.classes = {
      {"furnace", 0.465, 150, 120, 10, OnTimeDistribution::uniform, 12.0, 2.0, 1.0},
      {"washer/dryer", 2.50, 20, 20, 10, OnTimeDistribution::clustered, 20.0, 2.0, 1.0},
      {"oven", 5.00, 10, 10, 5, OnTimeDistribution::clustered, 18.0, 1.5, 1.0},
      {"kitchen apps", 0.37, 60, 40, 4, OnTimeDistribution::uniform, 12.0, 2.0, 1.0},
  };
  return spec;
}

}  // namespace disagg
