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

// L0-constrained binary coding of one residual against a sparse binary basis.
//
// The problem  min ||r - W h||^2  s.t. h binary, ||h||_0 <= L  is NP-hard in
// general. hill_climb() solves it greedily: starting from h = 0 it repeatedly
// switches on the column k with the most negative change in error,
//
//   delta_k = sum_{d in D_k} (1 - 2 r_d),
//
// subtracts that column from r, and removes k from the candidates. It stops
// once ||h||_0 == L or no remaining column has delta_k < 0. brute_force_best()
// enumerates every feasible h and exists to check the greedy solver.

#pragma once

#include <vector>

#include <Eigen/Core>

#include "disagg/model.hpp"

namespace disagg {

// Residual for one (class, sample) pair, already divided by the class peak.
// Entries may be negative when other components over-explain the sample.
struct Residual {
  Eigen::VectorXd values;
};

enum class HillClimbTermination { budget_exhausted, no_improving_move };

struct HillClimbTrace {
  std::vector<Index> selected;          // in selection order
  std::vector<double> objective_before; // ||r - W h||^2 before each accepted step
  std::vector<double> objective_after;  // ... and after it
  HillClimbTermination termination = HillClimbTermination::no_improving_move;
};

struct HillClimbResult {
  BinaryVector weights;
  HillClimbTrace trace;
};

// (x(n) - Wf hf(n) - sum_{j' != j} peak_j' Ws_j' hs_j'(n)) / peak_j.
Residual compute_residual(const Eigen::MatrixXd& data, const DisaggregationModel& model,
                          Index class_index, Index sample);

// Greedy solver. Ties in delta_k go to the lowest column index.
HillClimbResult hill_climb(const SparseBinaryBasis& basis, const Residual& residual, int budget);

struct BruteForceResult {
  BinaryVector weights;
  double objective = 0.0;
};

inline constexpr Index kBruteForceMaxColumns = 20;

// Exhaustive minimizer over all h with ||h||_0 <= budget. Ties go to the
// lexicographically smallest h. Throws ConfigError when the basis has more
// than kBruteForceMaxColumns columns.
BruteForceResult brute_force_best(const SparseBinaryBasis& basis, const Residual& residual,
                                  int budget);

// ||r - W h||^2, summed in row order.
double squared_error(const SparseBinaryBasis& basis, const Residual& residual,
                     const BinaryVector& weights);

std::string_view to_string(HillClimbTermination termination);

}  // namespace disagg
