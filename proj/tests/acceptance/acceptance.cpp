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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any selected criterion fails. Pass criterion numbers as
// arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "disagg/config.hpp"
#include "disagg/csv.hpp"
#include "disagg/evaluation.hpp"
#include "disagg/fixed_updates.hpp"
#include "disagg/hill_climb.hpp"
#include "disagg/objective.hpp"
#include "disagg/synth.hpp"
#include "disagg/trainer.hpp"
#include "oracles.hpp"

namespace {

using namespace disagg;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome oracle_equality_single_bit() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> dim(1, 12), cols(1, 10), support(1, 3);
  const int instances = 500;
  int mismatches = 0;
  for (int t = 0; t < instances; ++t) {
    const Index d = dim(rng);
    const auto basis = testing::random_basis(rng, d, cols(rng), support(rng));
    const Residual r{testing::random_uniform(rng, d, 0.0, 2.0)};
    const double greedy = squared_error(basis, r, hill_climb(basis, r, 1).weights);
    if (greedy != brute_force_best(basis, r, 1).objective) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 5.0, std::to_string(instances) + " instances, " + std::to_string(mismatches) +
                                             " mismatches, " + fmt("%.3f s", secs) + " (limit 5 s)"};
}

Outcome soundness_general_budget() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1002);
  std::uniform_int_distribution<int> dim(1, 12), cols(1, 12), support(1, 3), budget(1, 4);
  const int instances = 500;
  int violations = 0, strictly_worse = 0;
  for (int t = 0; t < instances; ++t) {
    const Index d = dim(rng);
    const auto basis = testing::random_basis(rng, d, cols(rng), support(rng));
    const Residual r{testing::random_uniform(rng, d, 0.0, 2.0)};
    const int l = budget(rng);
    const auto out = hill_climb(basis, r, l);
    const auto& tr = out.trace;
    const double got = squared_error(basis, r, out.weights);
    const double best = brute_force_best(basis, r, l).objective;
    const double zero = squared_error(basis, r, BinaryVector::Zero(basis.cols()));
    bool ok = got >= best && got <= zero;
    ok = ok && out.weights.cast<int>().sum() <= l && static_cast<int>(tr.selected.size()) <= l;
    for (std::size_t s = 0; s < tr.selected.size(); ++s) ok = ok && tr.objective_after[s] < tr.objective_before[s];
    if (!ok) ++violations;
    if (got > best) ++strictly_worse;
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 10.0,
          std::to_string(instances) + " instances, " + std::to_string(violations) + " violations (" +
              std::to_string(strictly_worse) + " where greedy is above the optimum), " + fmt("%.3f s", secs) +
              " (limit 10 s)"};
}

Outcome identity_thresholding() {
  std::mt19937_64 rng(1003);
  std::uniform_int_distribution<int> dim(1, 60), budget(1, 15);
  std::uniform_int_distribution<int> coarse(0, 8);
  std::uniform_real_distribution<double> fine(-1.0, 2.0);
  const int instances = 300;
  int mismatches = 0;
  for (int t = 0; t < instances; ++t) {
    const Index d = dim(rng);
    Eigen::VectorXd r(d);
    // Every third instance uses values on a coarse grid, so ties and exact
    // 0.5 entries occur.
    for (Index i = 0; i < d; ++i) r(i) = t % 3 == 0 ? 0.25 * coarse(rng) - 0.5 : fine(rng);
    const int l = budget(rng);
    const auto out = hill_climb(make_basis(BasisKind::identity, d, 1), Residual{r}, l);
    std::vector<Index> got;
    for (Index k = 0; k < d; ++k)
      if (out.weights(k)) got.push_back(k);
    if (got != testing::threshold_oracle(r, l)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(instances) + " instances, " + std::to_string(mismatches) + " mismatches"};
}

Outcome fixed_point_and_zeros() {
  std::mt19937_64 rng(1004);
  const double eps = 1e-12;
  double worst = 0.0;
  int zero_breaks = 0;
  int cases = 0;
  for (auto rule : {UpdateRule::paper_kl, UpdateRule::frobenius}) {
    for (int t = 0; t < 50; ++t) {
      auto f = initialize_fixed(20, 8, 1 + t % 3, rng, eps);
      f.basis(t % 20, 0) = 0.0;
      f.weights(0, t % 8) = 0.0;
      f.basis = normalize_basis_columns(f.basis, eps).basis;
      const Eigen::MatrixXd x = f.basis * f.weights;
      FixedLoadFactors g = f;
      g.basis = update_fixed_basis(x, g.basis * g.weights, g, rule, eps);
      normalize_fixed(g, eps);
      g.weights = update_fixed_weights(x, g.basis * g.weights, g, rule, eps);
      worst = std::max({worst, (g.basis - f.basis).cwiseAbs().maxCoeff(), (g.weights - f.weights).cwiseAbs().maxCoeff()});
      for (Index i = 0; i < f.basis.size(); ++i)
        if (f.basis(i) == 0.0 && g.basis(i) != 0.0) ++zero_breaks;
      for (Index i = 0; i < f.weights.size(); ++i)
        if (f.weights(i) == 0.0 && g.weights(i) != 0.0) ++zero_breaks;
      ++cases;
    }
  }
  return {worst <= 1e-12 && zero_breaks == 0, std::to_string(cases) + " cycles over both rules, max change " +
                                                  fmt("%.3g", worst) + " (limit 1e-12), " +
                                                  std::to_string(zero_breaks) + " zeros lost"};
}

Outcome block_monotonicity() {
  std::mt19937_64 rng(1005);
  int frob_bad = 0, kl_bad = 0;
  double frob_worst = 0.0, kl_worst = 0.0;
  const int problems = 20;
  for (int p = 0; p < problems; ++p) {
    const Eigen::MatrixXd x = testing::random_uniform(rng, 160, 0.0, 1.0).reshaped(20, 8);
    ModelConfig c;
    c.fixed_rank = 1 + p % 4;
    c.max_iterations = 100;
    c.convergence_tol = 0.0;
    c.rng_seed = static_cast<std::uint64_t>(p);
    const EnergyDataset ds{x, 72, std::vector<std::string>(8, "")};

    c.update_rule = UpdateRule::frobenius;
    const auto trace = fit(ds, c).report.objective_trace;
    for (std::size_t i = 1; i < trace.size(); ++i) {
      frob_worst = std::max(frob_worst, trace[i] - trace[i - 1]);
      if (trace[i] > trace[i - 1] + 1e-10) ++frob_bad;
    }

    c.update_rule = UpdateRule::paper_kl;
    double previous = testing::generalized_kl(x, fixed_contribution(initialize_model(20, 8, c).fixed));
    fit(ds, c, [&](const IterationInfo& info) {
      const double kl = testing::generalized_kl(x, fixed_contribution(info.model->fixed));
      kl_worst = std::max(kl_worst, kl - previous);
      if (kl > previous + 1e-10) ++kl_bad;
      previous = kl;
    });
  }
  return {frob_bad == 0 && kl_bad == 0,
          std::to_string(problems) + " problems x 100 iterations; frobenius increases " + std::to_string(frob_bad) +
              " (largest step " + fmt("%.3g", frob_worst) + "), KL increases " + std::to_string(kl_bad) +
              " (largest step " + fmt("%.3g", kl_worst) + ")"};
}

Outcome invariant_sweep() {
  const auto synth = generate(reference_household_spec(0.01, 6));
  ModelConfig c = model_config_for(reference_household_spec(0.01, 6));
  c.max_iterations = 50;
  c.convergence_tol = 0.0;
  int iterations = 0, violations = 0;
  double worst_norm = 0.0;
  fit(synth.dataset, c, [&](const IterationInfo& info) {
    ++iterations;
    const auto& m = *info.model;
    if (m.fixed.basis.minCoeff() < 0.0 || m.fixed.weights.minCoeff() < 0.0) ++violations;
    for (Index k = 0; k < m.fixed.basis.cols(); ++k) {
      const double dev = std::abs(m.fixed.basis.col(k).norm() - 1.0);
      worst_norm = std::max(worst_norm, dev);
      if (dev > 1e-9) ++violations;
    }
    for (const auto& load : m.shiftable) {
      if (load.weights.size() && load.weights.maxCoeff() > 1) ++violations;
      for (Index n = 0; n < load.weights.cols(); ++n)
        if (load.weights.col(n).cast<int>().sum() > load.l0_budget) ++violations;
    }
  });
  return {iterations == 50 && violations == 0,
          std::to_string(iterations) + " iterations on 1440x15 with 4 classes, " + std::to_string(violations) +
              " violations, max basis norm deviation " + fmt("%.3g", worst_norm)};
}

Outcome synthetic_recovery() {
  const auto t0 = Clock::now();
  const auto spec = load_synth_spec(DISAGG_SOURCE_DIR "/configs/synth_reference.json");
  const auto config = load_appliance_config(DISAGG_SOURCE_DIR "/configs/household.json");
  const auto synth = generate(spec);
  const auto result = fit(synth.dataset, config);
  const auto report = evaluate(result.model, synth.truth, synth.dataset);
  const double secs = seconds_since(t0);
  bool pass = secs < 300.0 && report.aggregate_rmse <= 3.0 * spec.noise_sigma;
  std::ostringstream detail;
  detail << "aggregate RMSE " << fmt("%.4f", report.aggregate_rmse) << " (limit " << fmt("%.4f", 3.0 * spec.noise_sigma)
         << ")";
  for (const auto& c : report.classes) {
    const bool gated = c.peak >= 0.465;
    if (gated && c.detection.f1 < 0.95) pass = false;
    detail << "; " << c.name << " F1 " << fmt("%.4f", c.detection.f1) << (gated ? " (limit 0.95)" : " (not gated)");
  }
  detail << "; " << result.report.iterations_run << " iterations, " << fmt("%.2f s", secs) << " (limit 300 s)";
  return {pass, detail.str()};
}

Outcome fit_determinism() {
  testing::TempDir dir("acceptance_determinism");
  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), "disagg");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  };
  const std::string root = dir.path().string();
  if (run({"synth", "--spec", DISAGG_SOURCE_DIR "/configs/synth_reference.json", "--out", root + "/synth"}) != 0) {
    return {false, "synth command failed"};
  }
  for (const char* out : {"/a", "/b"}) {
    if (run({"fit", "--data", root + "/synth/data.csv", "--config", DISAGG_SOURCE_DIR "/configs/household.json",
             "--out", root + out, "--seed", "7", "--sample-order", "random", "--class-order", "random"}) != 0) {
      return {false, "fit command failed"};
    }
  }
  std::map<std::string, std::string> a, b;
  for (const auto& e : fs::directory_iterator(root + "/a")) a[e.path().filename().string()] = testing::read_file(e.path());
  for (const auto& e : fs::directory_iterator(root + "/b")) b[e.path().filename().string()] = testing::read_file(e.path());
  std::size_t bytes = 0;
  for (const auto& [name, text] : a) bytes += text.size();
  return {!a.empty() && a == b,
          std::to_string(a.size()) + " files, " + std::to_string(bytes) + " bytes, " + (a == b ? "identical" : "differ")};
}

Outcome ingestion_shape() {
  testing::TempDir dir("acceptance_ingest");
  SynthSpec spec = reference_household_spec(0.01, 9);
  spec.samples = 21;
  spec.weekdays_only = false;
  const auto synth = generate(spec);
  write_timeseries_csv(dir.path() / "april.csv", synth.dataset, synth.truth);
  IngestOptions options;
  options.weekday_filter = true;
  const auto r = ingest_csv(dir.path() / "april.csv", options);
  const bool pass = r.dataset.rows() == 1440 && r.dataset.samples() == 15 &&
                    r.dataset.day_labels.front() == "2019-04-01" && r.dataset.day_labels.back() == "2019-04-19";
  return {pass, "21 days from 2019-04-01 -> D = " + std::to_string(r.dataset.rows()) +
                    ", N = " + std::to_string(r.dataset.samples()) + ", " + std::to_string(r.rejected.size()) +
                    " weekend days dropped"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "hill-climb equals exhaustive oracle at L=1", oracle_equality_single_bit},
      {2, "hill-climb soundness at general L", soundness_general_budget},
      {3, "identity-basis thresholding", identity_thresholding},
      {4, "fixed-load update fixed point and zero preservation", fixed_point_and_zeros},
      {5, "fixed-load block monotonicity", block_monotonicity},
      {6, "invariants during a 50-iteration fit", invariant_sweep},
      {7, "end-to-end synthetic recovery", synthetic_recovery},
      {8, "fit determinism", fit_determinism},
      {9, "ingestion shape with weekday filtering", ingestion_shape},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail << std::endl;
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
