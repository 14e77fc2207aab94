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

#include "disagg/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <thread>

#include "disagg/error.hpp"
#include "disagg/fixed_updates.hpp"
#include "disagg/hill_climb.hpp"

namespace disagg {

namespace {

// Separate streams for initialization and for sweep ordering.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  return std::mt19937_64(seq);
}

double half_squared_error(const Eigen::MatrixXd& data, const Eigen::MatrixXd& approx) {
  return 0.5 * (data - approx).squaredNorm();
}

Eigen::MatrixXd total_shiftable(const DisaggregationModel& model) {
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(model.rows(), model.samples());
  for (const auto& load : model.shiftable) {
    for (Index n = 0; n < shift.cols(); ++n) accumulate_class_column(load, n, load.peak, shift.col(n));
  }
  return shift;
}

// Gauss-Seidel pass over the classes of one sample. Writes only column `n` of
// each class's weight matrix.
void sweep_sample(const Eigen::MatrixXd& data, const Eigen::MatrixXd& fixed_recon, Index n,
                  const std::vector<std::size_t>& class_order, DisaggregationModel& model) {
  const Eigen::VectorXd base = data.col(n) - fixed_recon.col(n);
  for (std::size_t j : class_order) {
    auto& load = model.shiftable[j];
    Eigen::VectorXd r = base;
    for (std::size_t other = 0; other < model.shiftable.size(); ++other) {
      if (other == j) continue;
      const auto& o = model.shiftable[other];
      accumulate_class_column(o, n, -o.peak, r);
    }
    r /= load.peak;
    load.weights.col(n) = hill_climb(load.basis, Residual{std::move(r)}, load.l0_budget).weights;
  }
}

}  // namespace

DisaggregationModel initialize_model(Index rows, Index samples, const ModelConfig& config) {
  validate(config);
  if (rows < 1 || samples < 1) throw DimensionError("cannot initialize a model with no data");
  auto rng = make_rng(config.rng_seed, 0);
  DisaggregationModel model;
  model.fixed = initialize_fixed(rows, samples, config.fixed_rank, rng, config.epsilon);
  model.shiftable.reserve(config.classes.size());
  for (const auto& spec : config.classes) model.shiftable.push_back(make_class(spec, rows, samples));
  return model;
}

FitResult fit(const EnergyDataset& dataset, const ModelConfig& config,
              const ProgressCallback& progress) {
  validate(config);
  validate(dataset);
  return fit_from(dataset.values, initialize_model(dataset.rows(), dataset.samples(), config),
                  config, progress);
}

FitResult fit_from(const Eigen::MatrixXd& data, DisaggregationModel initial,
                   const ModelConfig& config, const ProgressCallback& progress) {
  validate(config);
  validate(initial);
  if (data.rows() != initial.rows() || data.cols() != initial.samples()) {
    throw DimensionError("data is " + std::to_string(data.rows()) + "x" +
                         std::to_string(data.cols()) + ", model expects " +
                         std::to_string(initial.rows()) + "x" + std::to_string(initial.samples()));
  }
  if (!data.allFinite() || (data.size() > 0 && data.minCoeff() < 0.0)) {
    throw DataError("training data must be finite and non-negative");
  }

  const auto start = std::chrono::steady_clock::now();
  FitResult result;
  auto& model = result.model;
  auto& report = result.report;
  model = std::move(initial);
  report.config = config;

  auto order_rng = make_rng(config.rng_seed, 1);
  const double eps = config.epsilon;
  const Index samples = data.cols();
  const std::size_t classes = model.shiftable.size();

  Eigen::MatrixXd shift = total_shiftable(model);
  Eigen::MatrixXd fixed_recon = fixed_contribution(model.fixed);
  double previous = half_squared_error(data, fixed_recon + shift);
  if (!std::isfinite(previous)) throw NumericalError("initial objective is not finite");
  report.objective_trace.push_back(previous);

  std::vector<Index> sample_order(static_cast<std::size_t>(samples));
  std::vector<std::vector<std::size_t>> class_orders(static_cast<std::size_t>(samples));
  const unsigned workers =
      static_cast<unsigned>(std::min<Index>(config.threads, std::max<Index>(samples, 1)));

  for (int it = 1; it <= config.max_iterations; ++it) {
    model.fixed.basis =
        update_fixed_basis(data, fixed_recon + shift, model.fixed, config.update_rule, eps);
    normalize_fixed(model.fixed, eps);
    fixed_recon = fixed_contribution(model.fixed);
    model.fixed.weights =
        update_fixed_weights(data, fixed_recon + shift, model.fixed, config.update_rule, eps);
    fixed_recon = fixed_contribution(model.fixed);

    if (classes > 0) {
      std::iota(sample_order.begin(), sample_order.end(), Index{0});
      if (config.sample_order == Order::random) {
        std::shuffle(sample_order.begin(), sample_order.end(), order_rng);
      }
      // Orders are drawn up front, in sample order, so that the result does
      // not depend on how the sweep is split across threads.
      for (Index n : sample_order) {
        auto& order = class_orders[static_cast<std::size_t>(n)];
        order.resize(classes);
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (config.class_order == Order::random) std::shuffle(order.begin(), order.end(), order_rng);
      }

      if (workers <= 1) {
        for (Index n : sample_order) {
          sweep_sample(data, fixed_recon, n, class_orders[static_cast<std::size_t>(n)], model);
        }
      } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            for (std::size_t i = w; i < sample_order.size(); i += workers) {
              const Index n = sample_order[i];
              sweep_sample(data, fixed_recon, n, class_orders[static_cast<std::size_t>(n)], model);
            }
          });
        }
      }
      shift = total_shiftable(model);
    }

    const double objective = half_squared_error(data, fixed_recon + shift);
    if (!std::isfinite(objective)) {
      throw NumericalError("objective became non-finite at iteration " + std::to_string(it));
    }
    report.objective_trace.push_back(objective);
    report.iterations_run = it;
    if (progress) progress(IterationInfo{it, objective, &model});

    const double change = std::abs(objective - previous) / std::max(previous, eps);
    previous = objective;
    if (change < config.convergence_tol) {
      report.termination = FitTermination::converged;
      break;
    }
  }

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string_view to_string(FitTermination termination) {
  return termination == FitTermination::converged ? "converged" : "max-iterations";
}

}  // namespace disagg
