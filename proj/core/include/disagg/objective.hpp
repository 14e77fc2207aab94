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

#pragma once

#include <Eigen/Core>

#include "disagg/model.hpp"

namespace disagg {

// Half squared Frobenius error, with its split over sample columns.
struct ObjectiveValue {
  double total = 0.0;
  Eigen::VectorXd per_sample;
};

// total = 0.5 * ||X - Xtilde||_F^2, per_sample[n] = 0.5 * ||x(n) - xtilde(n)||^2.
ObjectiveValue frobenius_objective(const Eigen::MatrixXd& data, const Eigen::MatrixXd& approx);
ObjectiveValue frobenius_objective(const Eigen::MatrixXd& data, const DisaggregationModel& model);

// Gaussian negative log-likelihood of the data with isotropic noise `sigma`:
// Phi / sigma^2 + N * log(sigma^D * (2 pi)^(D/2)). Diagnostic only; it orders
// models exactly as frobenius_objective does.
double negative_log_likelihood(const Eigen::MatrixXd& data, const DisaggregationModel& model,
                               double sigma);

}  // namespace disagg
