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

// Domain types shared by every stage of the disaggregation pipeline.
//
// A day of household energy use is a column x(n) of D interval readings. The
// model explains each column as a fixed load (a small non-negative NMF,
// basis * weights) plus one binary duty-cycle signal per shiftable appliance
// class, scaled by that appliance's peak draw:
//
//   X ~ Wf * Hf + sum_j peak_j * Ws_j * Hs_j
//
// Shiftable bases are stored as support sets (the rows a column switches ON);
// the peak is applied at reconstruction time, never baked into the basis.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace disagg {

using Index = Eigen::Index;
using BinaryVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;
using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// D x N matrix of non-negative energy readings, one column per day.
struct EnergyDataset {
  Eigen::MatrixXd values;
  int interval_minutes = 1;
  std::vector<std::string> day_labels;

  Index rows() const { return values.rows(); }
  Index samples() const { return values.cols(); }
};

// Throws DataError if entries are negative/non-finite, the label count does
// not match N, or interval_minutes is not positive.
void validate(const EnergyDataset& dataset);

// Real-valued part of the model. Basis columns are kept at unit Euclidean norm.
struct FixedLoadFactors {
  Eigen::MatrixXd basis;    // D x |F|
  Eigen::MatrixXd weights;  // |F| x N

  Index rank() const { return basis.cols(); }
};

// D x S binary matrix held as one sorted index set per column.
class SparseBinaryBasis {
 public:
  SparseBinaryBasis() = default;

  // Validates that every index lies in [0, rows) and no set has duplicates.
  // Indices within a set are sorted on construction.
  SparseBinaryBasis(Index rows, std::vector<std::vector<Index>> support_sets);

  Index rows() const { return rows_; }
  Index cols() const { return static_cast<Index>(support_.size()); }
  const std::vector<Index>& support(Index k) const { return support_[static_cast<std::size_t>(k)]; }
  const std::vector<std::vector<Index>>& support_sets() const { return support_; }

  Eigen::MatrixXd to_dense() const;

  // W * h for a binary h of length cols().
  Eigen::VectorXd apply(const BinaryVector& h) const;

  friend bool operator==(const SparseBinaryBasis&, const SparseBinaryBasis&) = default;

 private:
  Index rows_ = 0;
  std::vector<std::vector<Index>> support_;
};

enum class BasisKind { identity, rectangular_pulses };

// identity: S = D, column k = {k}.
// rectangular_pulses: S = D - pulse_width + 1, column k = [k, k + pulse_width).
SparseBinaryBasis make_basis(BasisKind kind, Index rows, Index pulse_width);

// One appliance class with ON/OFF duty cycles of constant draw `peak`.
struct ShiftableLoadClass {
  std::string name;
  double peak = 1.0;
  int l0_budget = 1;
  SparseBinaryBasis basis;
  BinaryMatrix weights;  // S x N, at most l0_budget ones per column
};

struct DisaggregationModel {
  FixedLoadFactors fixed;
  std::vector<ShiftableLoadClass> shiftable;

  Index rows() const { return fixed.basis.rows(); }
  Index samples() const { return fixed.weights.cols(); }
};

// Throws DimensionError naming the offending component, or ConfigError when a
// class violates its peak/budget/binarity contract.
void validate(const DisaggregationModel& model);

enum class UpdateRule { paper_kl, frobenius };
enum class Order { sequential, random };

struct ClassSpec {
  std::string name;
  double peak = 1.0;
  int l0_budget = 1;
  BasisKind basis_kind = BasisKind::identity;
  int pulse_width = 1;
};

struct ModelConfig {
  int fixed_rank = 1;
  std::vector<ClassSpec> classes;
  UpdateRule update_rule = UpdateRule::paper_kl;
  double epsilon = 1e-12;
  int max_iterations = 200;
  double convergence_tol = 1e-6;
  Order sample_order = Order::sequential;
  Order class_order = Order::sequential;
  std::uint64_t rng_seed = 0;
  // Worker threads for the shiftable sweep; results do not depend on it.
  int threads = 1;
};

// Throws ConfigError describing the first violated rule.
void validate(const ModelConfig& config);

// Builds an untrained class (all-zero weights) for a D x N problem.
ShiftableLoadClass make_class(const ClassSpec& spec, Index rows, Index samples);

// Xtilde = Wf Hf + sum_j peak_j Ws_j Hs_j.
Eigen::MatrixXd reconstruct(const DisaggregationModel& model);

Eigen::MatrixXd fixed_contribution(const FixedLoadFactors& fixed);

// peak * Ws * Hs as a dense D x N matrix.
Eigen::MatrixXd class_contribution(const ShiftableLoadClass& load);

// out += scale * Ws * h(n).
void accumulate_class_column(const ShiftableLoadClass& load, Index sample, double scale,
                             Eigen::Ref<Eigen::VectorXd> out);

// Per-component reconstructions of a model, the form exported and scored.
struct ClassReconstruction {
  std::string name;
  double peak = 1.0;
  Eigen::MatrixXd values;  // peak * Ws * Hs
};

struct Disaggregation {
  Eigen::MatrixXd fixed;      // Wf * Hf
  std::vector<ClassReconstruction> classes;
  Eigen::MatrixXd aggregate;  // Xtilde
};

Disaggregation disaggregate(const DisaggregationModel& model);

std::string_view to_string(BasisKind kind);
std::string_view to_string(UpdateRule rule);
std::string_view to_string(Order order);
BasisKind parse_basis_kind(std::string_view text);
UpdateRule parse_update_rule(std::string_view text);
Order parse_order(std::string_view text);

}  // namespace disagg
