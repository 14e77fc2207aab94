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

// Scoring a disaggregation against sub-metered ground truth.
//
// An interval is ON when its value exceeds peak / 2, for truth and prediction
// alike. Counts run over every (interval, day) entry. With no predicted ON
// entries precision is 0 and `no_predicted_on` is set; with no true ON entries
// recall is 0 and `no_true_on` is set. When both sets are empty the prediction
// is perfect and all three scores are 1.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "disagg/csv.hpp"
#include "disagg/model.hpp"

namespace disagg {

struct OnOffCounts {
  std::int64_t true_positive = 0;
  std::int64_t false_positive = 0;
  std::int64_t false_negative = 0;
};

struct DetectionScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool no_predicted_on = false;
  bool no_true_on = false;
};

OnOffCounts count_on_off(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& truth,
                         double threshold);
DetectionScores detection_scores(const OnOffCounts& counts);

double rmse(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& truth);

struct ClassScores {
  std::string name;
  double peak = 1.0;
  double rmse = 0.0;
  OnOffCounts counts;
  DetectionScores detection;
  double predicted_energy = 0.0;
  double true_energy = 0.0;
  // (predicted - true) / true; empty when the true energy is zero.
  std::optional<double> energy_relative_error;
};

struct EvalReport {
  std::vector<ClassScores> classes;
  double aggregate_rmse = 0.0;
};

// Classes are matched by name; truth may carry extra appliances, which are
// ignored. Throws DataError naming every model class missing from the truth,
// DimensionError on shape mismatch.
EvalReport evaluate(const Disaggregation& parts, const ApplianceGroundTruth& truth,
                    const Eigen::MatrixXd& data);
EvalReport evaluate(const DisaggregationModel& model, const ApplianceGroundTruth& truth,
                    const EnergyDataset& dataset);

std::string to_json(const EvalReport& report, int indent = 2);
std::string to_text(const EvalReport& report);

}  // namespace disagg
