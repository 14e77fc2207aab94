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

#include "disagg/fixed_updates.hpp"

#include <cmath>
#include <string>

#include "disagg/error.hpp"

namespace disagg {

namespace {

void check_shapes(const Eigen::MatrixXd& data, const Eigen::MatrixXd& approx,
                  const FixedLoadFactors& fixed) {
  if (data.rows() != approx.rows() || data.cols() != approx.cols()) {
    throw DimensionError("fixed update: data and reconstruction shapes differ");
  }
  if (fixed.basis.rows() != data.rows() || fixed.weights.cols() != data.cols() ||
      fixed.basis.cols() != fixed.weights.rows()) {
    throw DimensionError("fixed update: factors are " + std::to_string(fixed.basis.rows()) + "x" +
                         std::to_string(fixed.basis.cols()) + " and " +
                         std::to_string(fixed.weights.rows()) + "x" +
                         std::to_string(fixed.weights.cols()) + " for " +
                         std::to_string(data.rows()) + "x" + std::to_string(data.cols()) +
                         " data");
  }
}

}  // namespace

Eigen::MatrixXd update_fixed_basis(const Eigen::MatrixXd& data, const Eigen::MatrixXd& approx,
                                   const FixedLoadFactors& fixed, UpdateRule rule,
                                   double epsilon) {
  check_shapes(data, approx, fixed);
  const Eigen::MatrixXd floored = approx.cwiseMax(epsilon);
  const Eigen::MatrixXd& h = fixed.weights;
  Eigen::MatrixXd numer;
  Eigen::MatrixXd denom;
  if (rule == UpdateRule::paper_kl) {
    numer = data.cwiseQuotient(floored) * h.transpose();
    // 1_{DxN} H^T has every row equal to the row sums of H.
    denom = h.rowwise().sum().transpose().replicate(data.rows(), 1);
  } else {
    numer = data * h.transpose();
    denom = floored * h.transpose();
  }
  return fixed.basis.cwiseProduct(numer).cwiseQuotient(denom.cwiseMax(epsilon));
}

Eigen::MatrixXd update_fixed_weights(const Eigen::MatrixXd& data, const Eigen::MatrixXd& approx,
                                     const FixedLoadFactors& fixed, UpdateRule rule,
                                     double epsilon) {
  check_shapes(data, approx, fixed);
  const Eigen::MatrixXd floored = approx.cwiseMax(epsilon);
  const Eigen::MatrixXd& w = fixed.basis;
  Eigen::MatrixXd numer;
  Eigen::MatrixXd denom;
  if (rule == UpdateRule::paper_kl) {
    numer = w.transpose() * data.cwiseQuotient(floored);
    // W^T 1_{DxN} has every column equal to the column sums of W.
    denom = w.colwise().sum().transpose().replicate(1, data.cols());
  } else {
    numer = w.transpose() * data;
    denom = w.transpose() * floored;
  }
  return fixed.weights.cwiseProduct(numer).cwiseQuotient(denom.cwiseMax(epsilon));
}

Eigen::MatrixXd update_fixed_basis(const Eigen::MatrixXd& data, const DisaggregationModel& model,
                                   const ModelConfig& config) {
  return update_fixed_basis(data, reconstruct(model), model.fixed, config.update_rule,
                            config.epsilon);
}

Eigen::MatrixXd update_fixed_weights(const Eigen::MatrixXd& data, const DisaggregationModel& model,
                                     const ModelConfig& config) {
  return update_fixed_weights(data, reconstruct(model), model.fixed, config.update_rule,
                              config.epsilon);
}

NormalizedBasis normalize_basis_columns(const Eigen::MatrixXd& basis, double epsilon) {
  NormalizedBasis out{basis, basis.colwise().norm().transpose()};
  const double uniform = basis.rows() > 0 ? 1.0 / std::sqrt(static_cast<double>(basis.rows())) : 0.0;
  for (Index k = 0; k < basis.cols(); ++k) {
    if (out.norms(k) < epsilon) {
      out.basis.col(k).setConstant(uniform);
    } else {
      out.basis.col(k) /= out.norms(k);
    }
  }
  return out;
}

void normalize_fixed(FixedLoadFactors& fixed, double epsilon) {
  auto normalized = normalize_basis_columns(fixed.basis, epsilon);
  fixed.basis = std::move(normalized.basis);
  for (Index k = 0; k < fixed.weights.rows(); ++k) fixed.weights.row(k) *= normalized.norms(k);
}

FixedLoadFactors initialize_fixed(Index rows, Index samples, Index rank, std::mt19937_64& rng,
                                  double epsilon) {
  // 1 - U[0,1) lies in (0, 1].
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&] { return 1.0 - unit(rng); };
  FixedLoadFactors fixed;
  fixed.basis.resize(rows, rank);
  fixed.weights.resize(rank, samples);
  for (Index k = 0; k < rank; ++k) {
    for (Index d = 0; d < rows; ++d) fixed.basis(d, k) = draw();
  }
  for (Index n = 0; n < samples; ++n) {
    for (Index k = 0; k < rank; ++k) fixed.weights(k, n) = draw();
  }
  fixed.basis = normalize_basis_columns(fixed.basis, epsilon).basis;
  return fixed;
}

}  // namespace disagg
