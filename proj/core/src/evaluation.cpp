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

#include "disagg/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "disagg/error.hpp"

namespace disagg {

namespace {

void require_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(what + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

OnOffCounts count_on_off(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& truth,
                         double threshold) {
  require_same_shape(predicted, truth, "ON/OFF counts");
  OnOffCounts c;
  for (Index n = 0; n < truth.cols(); ++n) {
    for (Index d = 0; d < truth.rows(); ++d) {
      const bool p = predicted(d, n) > threshold;
      const bool t = truth(d, n) > threshold;
      c.true_positive += p && t;
      c.false_positive += p && !t;
      c.false_negative += !p && t;
    }
  }
  return c;
}

DetectionScores detection_scores(const OnOffCounts& c) {
  DetectionScores s;
  const auto predicted_on = c.true_positive + c.false_positive;
  const auto true_on = c.true_positive + c.false_negative;
  s.no_predicted_on = predicted_on == 0;
  s.no_true_on = true_on == 0;
  if (s.no_predicted_on && s.no_true_on) {
    s.precision = s.recall = s.f1 = 1.0;
    return s;
  }
  const auto tp = static_cast<double>(c.true_positive);
  s.precision = s.no_predicted_on ? 0.0 : tp / static_cast<double>(predicted_on);
  s.recall = s.no_true_on ? 0.0 : tp / static_cast<double>(true_on);
  const double denom = 2.0 * tp + static_cast<double>(c.false_positive + c.false_negative);
  s.f1 = 2.0 * tp / denom;
  return s;
}

double rmse(const Eigen::MatrixXd& predicted, const Eigen::MatrixXd& truth) {
  require_same_shape(predicted, truth, "RMSE");
  if (truth.size() == 0) return 0.0;
  return std::sqrt((predicted - truth).squaredNorm() / static_cast<double>(truth.size()));
}

EvalReport evaluate(const Disaggregation& parts, const ApplianceGroundTruth& truth,
                    const Eigen::MatrixXd& data) {
  std::vector<std::string> missing;
  std::vector<std::size_t> match;
  for (const auto& c : parts.classes) {
    std::size_t k = 0;
    while (k < truth.names.size() && truth.names[k] != c.name) ++k;
    if (k == truth.names.size()) missing.push_back(c.name);
    match.push_back(k);
  }
  if (!missing.empty()) {
    std::string msg = "no ground truth for class";
    msg += missing.size() > 1 ? "es" : "";
    for (std::size_t i = 0; i < missing.size(); ++i) msg += (i ? ", '" : " '") + missing[i] + "'";
    msg += "; truth has";
    if (truth.names.empty()) msg += " no appliances";
    for (std::size_t i = 0; i < truth.names.size(); ++i) msg += (i ? ", '" : " '") + truth.names[i] + "'";
    throw DataError(msg);
  }
  if (truth.usage.size() != truth.names.size()) {
    throw DataError("ground truth has " + std::to_string(truth.names.size()) + " names but " +
                    std::to_string(truth.usage.size()) + " matrices");
  }

  EvalReport report;
  report.aggregate_rmse = rmse(parts.aggregate, data);
  for (std::size_t j = 0; j < parts.classes.size(); ++j) {
    const auto& c = parts.classes[j];
    const auto& t = truth.usage[match[j]];
    require_same_shape(c.values, t, "class '" + c.name + "'");
    ClassScores s;
    s.name = c.name;
    s.peak = c.peak;
    s.rmse = rmse(c.values, t);
    s.counts = count_on_off(c.values, t, 0.5 * c.peak);
    s.detection = detection_scores(s.counts);
    s.predicted_energy = c.values.sum();
    s.true_energy = t.sum();
    if (s.true_energy != 0.0) s.energy_relative_error = (s.predicted_energy - s.true_energy) / s.true_energy;
    report.classes.push_back(std::move(s));
  }
  return report;
}

EvalReport evaluate(const DisaggregationModel& model, const ApplianceGroundTruth& truth,
                    const EnergyDataset& dataset) {
  validate(dataset);
  return evaluate(disaggregate(model), truth, dataset.values);
}

std::string to_json(const EvalReport& report, int indent) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : report.classes) {
    nlohmann::json flags = nlohmann::json::array();
    if (c.detection.no_predicted_on) flags.push_back("no-predicted-on");
    if (c.detection.no_true_on) flags.push_back("no-true-on");
    classes.push_back({{"name", c.name},
                       {"peak", c.peak},
                       {"rmse", c.rmse},
                       {"precision", c.detection.precision},
                       {"recall", c.detection.recall},
                       {"f1", c.detection.f1},
                       {"true_positive", c.counts.true_positive},
                       {"false_positive", c.counts.false_positive},
                       {"false_negative", c.counts.false_negative},
                       {"predicted_energy", c.predicted_energy},
                       {"true_energy", c.true_energy},
                       {"energy_relative_error",
                        c.energy_relative_error ? nlohmann::json(*c.energy_relative_error) : nlohmann::json()},
                       {"flags", flags}});
  }
  nlohmann::json doc{{"aggregate_rmse", report.aggregate_rmse}, {"classes", classes}};
  return doc.dump(indent);
}

std::string to_text(const EvalReport& report) {
  std::ostringstream out;
  out << "aggregate RMSE " << fixed4(report.aggregate_rmse) << "\n";
  for (const auto& c : report.classes) {
    out << c.name << ": F1 " << fixed4(c.detection.f1) << "  precision " << fixed4(c.detection.precision)
        << "  recall " << fixed4(c.detection.recall) << "  RMSE " << fixed4(c.rmse) << "  energy error ";
    out << (c.energy_relative_error ? fixed4(*c.energy_relative_error) : std::string("n/a"));
    if (c.detection.no_predicted_on) out << "  [no predicted ON]";
    if (c.detection.no_true_on) out << "  [no true ON]";
    out << "\n";
  }
  return out.str();
}

}  // namespace disagg
