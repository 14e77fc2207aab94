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


#include <random>

#include <benchmark/benchmark.h>

#include "disagg/hill_climb.hpp"
#include "disagg/model.hpp"
#include "disagg/synth.hpp"
#include "disagg/trainer.hpp"

namespace {

using namespace disagg;

void BM_HillClimbIdentity(benchmark::State& state) {
  const Index rows = state.range(0);
  const int budget = static_cast<int>(state.range(1));
  const auto basis = make_basis(BasisKind::identity, rows, 1);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  Eigen::VectorXd r(rows);
  for (Index i = 0; i < rows; ++i) r(i) = u(rng);
  const Residual residual{r};
  for (auto _ : state) benchmark::DoNotOptimize(hill_climb(basis, residual, budget));
}
BENCHMARK(BM_HillClimbIdentity)->Args({1440, 10})->Args({1440, 150})->Unit(benchmark::kMicrosecond);

void BM_HillClimbPulses(benchmark::State& state) {
  const auto basis = make_basis(BasisKind::rectangular_pulses, 1440, state.range(0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  Eigen::VectorXd r(1440);
  for (Index i = 0; i < 1440; ++i) r(i) = u(rng);
  const Residual residual{r};
  for (auto _ : state) benchmark::DoNotOptimize(hill_climb(basis, residual, 20));
}
BENCHMARK(BM_HillClimbPulses)->Arg(5)->Arg(30)->Unit(benchmark::kMicrosecond);

void BM_FitIteration(benchmark::State& state) {
  const auto spec = reference_household_spec(0.01, 1);
  const auto synth = generate(spec);
  ModelConfig config = model_config_for(spec);
  config.max_iterations = 1;
  config.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit(synth.dataset, config));
}
BENCHMARK(BM_FitIteration)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const auto synth = generate(reference_household_spec(0.01, 1));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(synth.model));
}
BENCHMARK(BM_Reconstruct)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
