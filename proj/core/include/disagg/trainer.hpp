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

// Block-coordinate training loop.
//
// Each iteration:
//   1. multiplicative update of the fixed basis,
//   2. column normalization (weights rescaled so the product is unchanged),
//   3. multiplicative update of the fixed weights,
//   4. for every sample, for every shiftable class: recompute that class's
//      residual and replace its weight column with the hill_climb solution.
// The loop stops when |Phi_t - Phi_{t-1}| / max(Phi_{t-1}, epsilon) falls
// below convergence_tol, or after max_iterations.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "disagg/model.hpp"

namespace disagg {

enum class FitTermination { converged, max_iterations };

struct FitReport {
  std::vector<double> objective_trace;  // Phi before the first iteration, then after each
  int iterations_run = 0;
  FitTermination termination = FitTermination::max_iterations;
  double wall_time_seconds = 0.0;
  ModelConfig config;
};

struct FitResult {
  DisaggregationModel model;
  FitReport report;
};

struct IterationInfo {
  int iteration = 0;  // 1-based
  double objective = 0.0;
  const DisaggregationModel* model = nullptr;
};

using ProgressCallback = std::function<void(const IterationInfo&)>;

// Initial model: random fixed factors (see initialize_fixed), zero shiftable
// weights. Deterministic in (rows, samples, config).
DisaggregationModel initialize_model(Index rows, Index samples, const ModelConfig& config);

// Runs the loop from initialize_model(). Throws ConfigError before doing any
// work when the config is invalid, NumericalError when Phi becomes non-finite.
FitResult fit(const EnergyDataset& dataset, const ModelConfig& config,
              const ProgressCallback& progress = {});

// Same loop from a caller-supplied starting model.
FitResult fit_from(const Eigen::MatrixXd& data, DisaggregationModel initial,
                   const ModelConfig& config, const ProgressCallback& progress = {});

std::string_view to_string(FitTermination termination);

}  // namespace disagg
