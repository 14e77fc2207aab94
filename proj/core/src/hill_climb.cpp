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

#include "disagg/hill_climb.hpp"

#include <bit>
#include <cstdint>
#include <string>

#include "disagg/error.hpp"

namespace disagg {

namespace {

void check_residual(const SparseBinaryBasis& basis, const Residual& residual) {
  if (residual.values.size() != basis.rows()) {
    throw DimensionError("residual has " + std::to_string(residual.values.size()) +
                         " entries, basis has " + std::to_string(basis.rows()) + " rows");
  }
}

double sum_of_squares(const Eigen::VectorXd& v) {
  double total = 0.0;
  for (Index d = 0; d < v.size(); ++d) total += v(d) * v(d);
  return total;
}

}  // namespace

Residual compute_residual(const Eigen::MatrixXd& data, const DisaggregationModel& model,
                          Index class_index, Index sample) {
  validate(model);
  if (class_index < 0 || class_index >= static_cast<Index>(model.shiftable.size())) {
    throw DimensionError("class index " + std::to_string(class_index) + " out of range");
  }
  if (sample < 0 || sample >= data.cols() || data.cols() != model.samples() ||
      data.rows() != model.rows()) {
    throw DimensionError("sample index or data shape does not match the model");
  }
  Eigen::VectorXd r = data.col(sample) - model.fixed.basis * model.fixed.weights.col(sample);
  for (std::size_t j = 0; j < model.shiftable.size(); ++j) {
    if (static_cast<Index>(j) == class_index) continue;
    const auto& other = model.shiftable[j];
    accumulate_class_column(other, sample, -other.peak, r);
  }
  r /= model.shiftable[static_cast<std::size_t>(class_index)].peak;
  return Residual{std::move(r)};
}

HillClimbResult hill_climb(const SparseBinaryBasis& basis, const Residual& residual, int budget) {
  check_residual(basis, residual);
  if (budget < 1) throw ConfigError("hill_climb budget must be at least 1");

  const Index columns = basis.cols();
  HillClimbResult result;
  result.weights = BinaryVector::Zero(columns);
  auto& trace = result.trace;

  Eigen::VectorXd r = residual.values;
  std::vector<char> candidate(static_cast<std::size_t>(columns), 1);
  int active = 0;

  while (true) {
    if (active == budget) {
      trace.termination = HillClimbTermination::budget_exhausted;
      break;
    }
    const double phi0 = sum_of_squares(r);
    Index best = -1;
    double best_delta = 0.0;
    for (Index k = 0; k < columns; ++k) {
      if (!candidate[static_cast<std::size_t>(k)]) continue;
      double delta = 0.0;
      for (Index d : basis.support(k)) delta += 1.0 - 2.0 * r(d);
      if (delta < best_delta) {
        best_delta = delta;
        best = k;
      }
    }
    if (best < 0) {
      trace.termination = HillClimbTermination::no_improving_move;
      break;
    }
    result.weights(best) = 1;
    candidate[static_cast<std::size_t>(best)] = 0;
    ++active;
    for (Index d : basis.support(best)) r(d) -= 1.0;
    trace.selected.push_back(best);
    trace.objective_before.push_back(phi0);
    trace.objective_after.push_back(phi0 + best_delta);
  }
  return result;
}

double squared_error(const SparseBinaryBasis& basis, const Residual& residual,
                     const BinaryVector& weights) {
  check_residual(basis, residual);
  const Eigen::VectorXd wh = basis.apply(weights);
  double total = 0.0;
  for (Index d = 0; d < wh.size(); ++d) {
    const double e = residual.values(d) - wh(d);
    total += e * e;
  }
  return total;
}

BruteForceResult brute_force_best(const SparseBinaryBasis& basis, const Residual& residual,
                                  int budget) {
  check_residual(basis, residual);
  const Index columns = basis.cols();
  if (columns > kBruteForceMaxColumns) {
    throw ConfigError("brute_force_best refuses " + std::to_string(columns) +
                      " columns (limit " + std::to_string(kBruteForceMaxColumns) + ")");
  }
  if (budget < 0) throw ConfigError("brute_force_best budget must be non-negative");

  const Eigen::MatrixXd dense = basis.to_dense();
  const Index rows = basis.rows();
  const std::uint32_t limit = std::uint32_t{1} << columns;

  // Bit k of a mask is h_k. h is lexicographically smaller when, at the lowest
  // index where the two differ, it holds the 0.
  auto lex_less = [](std::uint32_t a, std::uint32_t b) {
    const std::uint32_t diff = a ^ b;
    if (diff == 0) return false;
    const std::uint32_t lowest = diff & (~diff + 1);
    return (a & lowest) == 0;
  };

  std::uint32_t best_mask = 0;
  double best = 0.0;
  bool have_best = false;
  Eigen::VectorXd wh(rows);
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (std::popcount(mask) > budget) continue;
    wh.setZero();
    for (Index k = 0; k < columns; ++k) {
      if (mask & (std::uint32_t{1} << k)) wh += dense.col(k);
    }
    double objective = 0.0;
    for (Index d = 0; d < rows; ++d) {
      const double e = residual.values(d) - wh(d);
      objective += e * e;
    }
    if (!have_best || objective < best || (objective == best && lex_less(mask, best_mask))) {
      best = objective;
      best_mask = mask;
      have_best = true;
    }
  }

  BruteForceResult result;
  result.weights = BinaryVector::Zero(columns);
  for (Index k = 0; k < columns; ++k) {
    if (best_mask & (std::uint32_t{1} << k)) result.weights(k) = 1;
  }
  result.objective = best;
  return result;
}

std::string_view to_string(HillClimbTermination termination) {
  return termination == HillClimbTermination::budget_exhausted ? "budget-exhausted"
                                                               : "no-improving-move";
}

}  // namespace disagg
