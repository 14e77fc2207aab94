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

#include "disagg/objective.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "disagg/error.hpp"

namespace disagg {

ObjectiveValue frobenius_objective(const Eigen::MatrixXd& data, const Eigen::MatrixXd& approx) {
  if (data.rows() != approx.rows() || data.cols() != approx.cols()) {
    throw DimensionError("objective: data is " + std::to_string(data.rows()) + "x" +
                         std::to_string(data.cols()) + ", reconstruction is " +
                         std::to_string(approx.rows()) + "x" + std::to_string(approx.cols()));
  }
  ObjectiveValue value;
  value.per_sample = 0.5 * (data - approx).colwise().squaredNorm().transpose();
  value.total = value.per_sample.sum();
  return value;
}

ObjectiveValue frobenius_objective(const Eigen::MatrixXd& data, const DisaggregationModel& model) {
  return frobenius_objective(data, reconstruct(model));
}

double negative_log_likelihood(const Eigen::MatrixXd& data, const DisaggregationModel& model,
                               double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("sigma must be a positive finite number");
  }
  const double phi = frobenius_objective(data, model).total;
  const auto d = static_cast<double>(data.rows());
  const auto n = static_cast<double>(data.cols());
  // log(sigma^D (2 pi)^(D/2)) expanded so large D does not overflow.
  const double log_normalizer = d * std::log(sigma) + 0.5 * d * std::log(2.0 * std::numbers::pi);
  return phi / (sigma * sigma) + n * log_normalizer;
}

}  // namespace disagg
