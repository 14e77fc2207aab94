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

#include "disagg/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "disagg/error.hpp"

namespace disagg {

namespace {

std::string shape(Index rows, Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

}  // namespace

void validate(const EnergyDataset& dataset) {
  if (dataset.interval_minutes <= 0) {
    throw DataError("interval_minutes must be positive");
  }
  if (static_cast<Index>(dataset.day_labels.size()) != dataset.samples()) {
    throw DataError("dataset has " + std::to_string(dataset.samples()) + " columns but " +
                    std::to_string(dataset.day_labels.size()) + " day labels");
  }
  if (!dataset.values.allFinite()) throw DataError("dataset contains non-finite values");
  if (dataset.values.size() > 0 && dataset.values.minCoeff() < 0.0) {
    throw DataError("dataset contains negative values");
  }
}

SparseBinaryBasis::SparseBinaryBasis(Index rows, std::vector<std::vector<Index>> support_sets)
    : rows_(rows), support_(std::move(support_sets)) {
  if (rows_ < 0) throw DimensionError("basis row count must be non-negative");
  for (std::size_t k = 0; k < support_.size(); ++k) {
    auto& set = support_[k];
    std::sort(set.begin(), set.end());
    if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
      throw DimensionError("basis column " + std::to_string(k) + " has duplicate row indices");
    }
    if (!set.empty() && (set.front() < 0 || set.back() >= rows_)) {
      throw DimensionError("basis column " + std::to_string(k) + " has a row index outside [0, " +
                           std::to_string(rows_) + ")");
    }
  }
}

Eigen::MatrixXd SparseBinaryBasis::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows_, cols());
  for (Index k = 0; k < cols(); ++k) {
    for (Index d : support(k)) dense(d, k) = 1.0;
  }
  return dense;
}

Eigen::VectorXd SparseBinaryBasis::apply(const BinaryVector& h) const {
  if (h.size() != cols()) {
    throw DimensionError("weight vector has length " + std::to_string(h.size()) + ", basis has " +
                         std::to_string(cols()) + " columns");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(rows_);
  for (Index k = 0; k < cols(); ++k) {
    if (h(k) == 0) continue;
    for (Index d : support(k)) out(d) += 1.0;
  }
  return out;
}

SparseBinaryBasis make_basis(BasisKind kind, Index rows, Index pulse_width) {
  if (rows < 1) throw ConfigError("basis needs at least one row");
  if (pulse_width < 1) throw ConfigError("pulse_width must be at least 1");
  if (pulse_width > rows) {
    throw ConfigError("pulse_width " + std::to_string(pulse_width) + " exceeds row count " +
                      std::to_string(rows));
  }
  std::vector<std::vector<Index>> sets;
  switch (kind) {
    case BasisKind::identity:
      sets.reserve(static_cast<std::size_t>(rows));
      for (Index k = 0; k < rows; ++k) sets.push_back({k});
      break;
    case BasisKind::rectangular_pulses:
      sets.reserve(static_cast<std::size_t>(rows - pulse_width + 1));
      for (Index k = 0; k + pulse_width <= rows; ++k) {
        std::vector<Index> set(static_cast<std::size_t>(pulse_width));
        for (Index i = 0; i < pulse_width; ++i) set[static_cast<std::size_t>(i)] = k + i;
        sets.push_back(std::move(set));
      }
      break;
  }
  return SparseBinaryBasis(rows, std::move(sets));
}

void validate(const DisaggregationModel& model) {
  const Index rows = model.fixed.basis.rows();
  const Index samples = model.fixed.weights.cols();
  if (model.fixed.weights.rows() != model.fixed.basis.cols()) {
    throw DimensionError("fixed load: basis is " + shape(rows, model.fixed.basis.cols()) +
                         " but weights are " +
                         shape(model.fixed.weights.rows(), model.fixed.weights.cols()));
  }
  for (const auto& load : model.shiftable) {
    const std::string who = "shiftable class '" + load.name + "'";
    if (load.basis.rows() != rows) {
      throw DimensionError(who + ": basis has " + std::to_string(load.basis.rows()) +
                           " rows, fixed load has " + std::to_string(rows));
    }
    if (load.weights.rows() != load.basis.cols() || load.weights.cols() != samples) {
      throw DimensionError(who + ": weights are " +
                           shape(load.weights.rows(), load.weights.cols()) + ", expected " +
                           shape(load.basis.cols(), samples));
    }
    if (!(load.peak > 0.0) || !std::isfinite(load.peak)) {
      throw ConfigError(who + ": peak must be positive");
    }
    if (load.l0_budget < 1) throw ConfigError(who + ": l0_budget must be at least 1");
    for (Index n = 0; n < samples; ++n) {
      Index ones = 0;
      for (Index k = 0; k < load.weights.rows(); ++k) {
        const auto v = load.weights(k, n);
        if (v > 1) throw ConfigError(who + ": weights must be binary");
        ones += v;
      }
      if (ones > load.l0_budget) {
        throw ConfigError(who + ": sample " + std::to_string(n) + " has " + std::to_string(ones) +
                          " active weights, budget is " + std::to_string(load.l0_budget));
      }
    }
  }
}

void validate(const ModelConfig& config) {
  if (config.fixed_rank < 1) throw ConfigError("fixed_rank must be at least 1");
  if (!(config.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (config.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (!(config.convergence_tol >= 0.0)) throw ConfigError("convergence_tol must be non-negative");
  if (config.threads < 1) throw ConfigError("threads must be at least 1");
  std::set<std::string> names;
  for (const auto& cls : config.classes) {
    if (cls.name.empty()) throw ConfigError("class name must not be empty");
    if (!names.insert(cls.name).second) throw ConfigError("duplicate class name '" + cls.name + "'");
    if (!(cls.peak > 0.0) || !std::isfinite(cls.peak)) {
      throw ConfigError("class '" + cls.name + "': peak must be positive");
    }
    if (cls.l0_budget < 1) throw ConfigError("class '" + cls.name + "': l0_budget must be at least 1");
    if (cls.pulse_width < 1) {
      throw ConfigError("class '" + cls.name + "': pulse_width must be at least 1");
    }
  }
}

ShiftableLoadClass make_class(const ClassSpec& spec, Index rows, Index samples) {
  ShiftableLoadClass load;
  load.name = spec.name;
  load.peak = spec.peak;
  load.l0_budget = spec.l0_budget;
  load.basis = make_basis(spec.basis_kind, rows, spec.pulse_width);
  load.weights = BinaryMatrix::Zero(load.basis.cols(), samples);
  return load;
}

Eigen::MatrixXd fixed_contribution(const FixedLoadFactors& fixed) {
  return fixed.basis * fixed.weights;
}

void accumulate_class_column(const ShiftableLoadClass& load, Index sample, double scale,
                             Eigen::Ref<Eigen::VectorXd> out) {
  for (Index k = 0; k < load.weights.rows(); ++k) {
    if (load.weights(k, sample) == 0) continue;
    for (Index d : load.basis.support(k)) out(d) += scale;
  }
}

Eigen::MatrixXd class_contribution(const ShiftableLoadClass& load) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(load.basis.rows(), load.weights.cols());
  for (Index n = 0; n < out.cols(); ++n) accumulate_class_column(load, n, load.peak, out.col(n));
  return out;
}

Eigen::MatrixXd reconstruct(const DisaggregationModel& model) {
  validate(model);
  Eigen::MatrixXd out = fixed_contribution(model.fixed);
  for (const auto& load : model.shiftable) {
    for (Index n = 0; n < out.cols(); ++n) accumulate_class_column(load, n, load.peak, out.col(n));
  }
  return out;
}

Disaggregation disaggregate(const DisaggregationModel& model) {
  validate(model);
  Disaggregation out;
  out.fixed = fixed_contribution(model.fixed);
  for (const auto& load : model.shiftable) {
    out.classes.push_back({load.name, load.peak, class_contribution(load)});
  }
  out.aggregate = reconstruct(model);
  return out;
}

std::string_view to_string(BasisKind kind) {
  return kind == BasisKind::identity ? "identity" : "rectangular-pulses";
}

std::string_view to_string(UpdateRule rule) {
  return rule == UpdateRule::paper_kl ? "paper-kl" : "frobenius";
}

std::string_view to_string(Order order) {
  return order == Order::sequential ? "sequential" : "random";
}

BasisKind parse_basis_kind(std::string_view text) {
  if (text == "identity") return BasisKind::identity;
  if (text == "rectangular-pulses") return BasisKind::rectangular_pulses;
  throw ConfigError("unknown basis_kind '" + std::string(text) +
                    "' (expected identity or rectangular-pulses)");
}

UpdateRule parse_update_rule(std::string_view text) {
  if (text == "paper-kl") return UpdateRule::paper_kl;
  if (text == "frobenius") return UpdateRule::frobenius;
  throw ConfigError("unknown update_rule '" + std::string(text) +
                    "' (expected paper-kl or frobenius)");
}

Order parse_order(std::string_view text) {
  if (text == "sequential") return Order::sequential;
  if (text == "random") return Order::random;
  throw ConfigError("unknown order '" + std::string(text) + "' (expected sequential or random)");
}

}  // namespace disagg
