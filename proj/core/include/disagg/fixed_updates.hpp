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

// Multiplicative updates for the fixed-load factors.
//
// Two rules are provided. UpdateRule::paper_kl is the ratio form
//
//   Wf <- Wf o ((X / Xtilde) Hf^T) / (1 Hf^T)
//   Hf <- Hf o (Wf^T (X / Xtilde)) / (Wf^T 1)
//
// which descends the generalized KL divergence. UpdateRule::frobenius is the
// Lee-Seung least-squares form
//
//   Wf <- Wf o (X Hf^T) / (Xtilde Hf^T)
//   Hf <- Hf o (Wf^T X) / (Wf^T Xtilde)
//
// In both, Xtilde is the full reconstruction including shiftable loads, and
// Xtilde plus every denominator is floored at epsilon.

#pragma once

#include <random>

#include <Eigen/Core>

#include "disagg/model.hpp"

namespace disagg {

Eigen::MatrixXd update_fixed_basis(const Eigen::MatrixXd& data, const Eigen::MatrixXd& approx,
                                   const FixedLoadFactors& fixed, UpdateRule rule, double epsilon);
Eigen::MatrixXd update_fixed_weights(const Eigen::MatrixXd& data, const Eigen::MatrixXd& approx,
                                     const FixedLoadFactors& fixed, UpdateRule rule,
                                     double epsilon);

// Model-level forms; Xtilde is recomputed from `model`.
Eigen::MatrixXd update_fixed_basis(const Eigen::MatrixXd& data, const DisaggregationModel& model,
                                   const ModelConfig& config);
Eigen::MatrixXd update_fixed_weights(const Eigen::MatrixXd& data, const DisaggregationModel& model,
                                     const ModelConfig& config);

struct NormalizedBasis {
  Eigen::MatrixXd basis;
  Eigen::VectorXd norms;  // column norms before normalization
};

// Scales every column to unit Euclidean norm. Columns whose norm is below
// epsilon are replaced by the uniform vector 1/sqrt(D).
NormalizedBasis normalize_basis_columns(const Eigen::MatrixXd& basis, double epsilon);

// Normalizes the basis in place and multiplies each weight row by the old
// column norm, leaving basis * weights unchanged.
void normalize_fixed(FixedLoadFactors& fixed, double epsilon);

// Entries uniform on (0, 1], basis normalized.
FixedLoadFactors initialize_fixed(Index rows, Index samples, Index rank, std::mt19937_64& rng,
                                  double epsilon);

}  // namespace disagg
