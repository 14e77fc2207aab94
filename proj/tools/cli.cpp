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


#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "disagg/config.hpp"
#include "disagg/csv.hpp"
#include "disagg/error.hpp"
#include "disagg/evaluation.hpp"
#include "disagg/export.hpp"
#include "disagg/objective.hpp"
#include "disagg/synth.hpp"
#include "disagg/trainer.hpp"
#include "svg.hpp"

namespace disagg::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kOutDirVariable = "DISAGG_OUT_DIR";

struct UsageError : Error {
  using Error::Error;
};

fs::path output_path(const std::string& given, const std::string& fallback_name) {
  if (!given.empty()) return given;
  const char* env = std::getenv(kOutDirVariable);
  if (!env || !*env) {
    throw UsageError(std::string("--out not given and ") + kOutDirVariable + " is not set");
  }
  return fallback_name.empty() ? fs::path(env) : fs::path(env) / fallback_name;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw DataError("cannot write " + path.string());
}

struct IngestFlags {
  int interval_minutes = 1;
  bool weekdays_only = false;
  std::string from;
  std::string to;
  std::string timestamp_column = "timestamp";
  std::string value_column = "kWh";

  void add_to(CLI::App& app) {
    app.add_option("--interval-minutes", interval_minutes, "Minutes per interval")->check(CLI::PositiveNumber);
    app.add_flag("--weekdays-only", weekdays_only, "Drop Saturdays and Sundays");
    app.add_option("--from", from, "First day to keep (YYYY-MM-DD)");
    app.add_option("--to", to, "Last day to keep (YYYY-MM-DD)");
    app.add_option("--timestamp-column", timestamp_column, "Timestamp column name");
    app.add_option("--value-column", value_column, "Aggregate energy column name");
  }

  IngestOptions options() const {
    IngestOptions o;
    o.interval_minutes = interval_minutes;
    o.weekday_filter = weekdays_only;
    o.timestamp_column = timestamp_column;
    o.value_column = value_column;
    auto date = [](const std::string& s, const char* flag) {
      auto d = parse_date(s);
      if (!d) throw UsageError(std::string(flag) + " expects YYYY-MM-DD, got '" + s + "'");
      return *d;
    };
    if (!from.empty()) o.first_day = date(from, "--from");
    if (!to.empty()) o.last_day = date(to, "--to");
    return o;
  }
};

// Columns of an ingested file for the given day labels, in that order.
struct SelectedDays {
  Eigen::MatrixXd data;
  ApplianceGroundTruth truth;
};

SelectedDays select_days(const IngestResult& ingested, const std::vector<std::string>& labels,
                         const std::string& file) {
  const auto& have = ingested.dataset.day_labels;
  SelectedDays out;
  out.data.resize(ingested.dataset.rows(), static_cast<Index>(labels.size()));
  out.truth.names = ingested.truth.names;
  for (const auto& u : ingested.truth.usage) out.truth.usage.emplace_back(u.rows(), out.data.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = std::find(have.begin(), have.end(), labels[i]);
    if (it == have.end()) throw DataError(file + " has no complete day " + labels[i]);
    const auto src = static_cast<Index>(it - have.begin());
    const auto dst = static_cast<Index>(i);
    out.data.col(dst) = ingested.dataset.values.col(src);
    for (std::size_t k = 0; k < out.truth.usage.size(); ++k) {
      out.truth.usage[k].col(dst) = ingested.truth.usage[k].col(src);
    }
  }
  return out;
}

IngestResult ingest_for_model(const fs::path& file, const LoadedDisaggregation& model,
                              const IngestFlags& flags) {
  IngestOptions options = flags.options();
  options.interval_minutes = model.interval_minutes;
  options.weekday_filter = false;
  return ingest_csv(file, options);
}

int cmd_synth(const std::string& spec_file, const std::string& out_arg, std::ostream& out) {
  // Everything that can fail on a bad spec happens before the first write.
  const SynthSpec spec = load_synth_spec(spec_file);
  const SynthResult result = generate(spec);
  const fs::path dir = output_path(out_arg, "");

  fs::create_directories(dir);
  write_timeseries_csv(dir / "data.csv", result.dataset, result.truth);
  write_file(dir / "config.json", to_json(model_config_for(spec)) + "\n");
  export_disaggregation(result.model, result.dataset, nullptr, dir / "true_model",
                        ExportOptions{(dir / "data.csv").string()});
  out << "wrote " << result.dataset.rows() << "x" << result.dataset.samples() << " dataset with "
      << result.truth.names.size() << " appliance columns to " << (dir / "data.csv").string() << "\n";
  return kSuccess;
}

struct FitFlags {
  std::string data;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iterations;
  std::optional<double> tol;
  std::optional<std::string> update_rule;
  std::optional<std::string> sample_order;
  std::optional<std::string> class_order;
  std::optional<int> threads;
  bool verbose = false;
  IngestFlags ingest;
};

int cmd_fit(const FitFlags& f, std::ostream& out, std::ostream& err) {
  ModelConfig config = load_appliance_config(f.config);
  if (f.seed) config.rng_seed = *f.seed;
  if (f.max_iterations) config.max_iterations = *f.max_iterations;
  if (f.tol) config.convergence_tol = *f.tol;
  if (f.update_rule) config.update_rule = parse_update_rule(*f.update_rule);
  if (f.sample_order) config.sample_order = parse_order(*f.sample_order);
  if (f.class_order) config.class_order = parse_order(*f.class_order);
  if (f.threads) config.threads = *f.threads;
  validate(config);
  const fs::path dir = output_path(f.out, "");

  const IngestResult ingested = ingest_csv(fs::path(f.data), f.ingest.options());
  for (const auto& r : ingested.rejected) err << "skipped " << r.label << ": " << r.reason << "\n";

  ProgressCallback progress;
  if (f.verbose) {
    progress = [&err](const IterationInfo& info) {
      err << "iteration " << info.iteration << " objective " << format_double(info.objective) << "\n";
    };
  }
  const FitResult result = fit(ingested.dataset, config, progress);
  export_disaggregation(result.model, ingested.dataset, &result.report, dir, ExportOptions{f.data});
  out << "fitted " << ingested.dataset.samples() << " days x " << ingested.dataset.rows() << " intervals, "
      << result.report.iterations_run << " iterations (" << to_string(result.report.termination)
      << "), objective " << format_double(result.report.objective_trace.back()) << ", "
      << result.report.wall_time_seconds << " s\n";
  return kSuccess;
}

int cmd_eval(const std::string& model_dir, const std::string& truth_file, bool as_json,
             const std::string& report_file, const IngestFlags& flags, std::ostream& out) {
  const LoadedDisaggregation model = read_disaggregation(model_dir);
  const IngestResult ingested = ingest_for_model(truth_file, model, flags);
  const SelectedDays days = select_days(ingested, model.day_labels, truth_file);
  const EvalReport report = evaluate(model.parts, days.truth, days.data);
  const std::string json = to_json(report) + "\n";
  if (!report_file.empty()) write_file(report_file, json);
  out << (as_json ? json : to_text(report));
  return kSuccess;
}

int cmd_plot(const std::string& model_dir, Index day, const std::string& out_arg,
             const std::string& data_arg, const IngestFlags& flags, std::ostream& out) {
  const LoadedDisaggregation model = read_disaggregation(model_dir);
  const Index samples = static_cast<Index>(model.day_labels.size());
  if (day < 0 || day >= samples) {
    throw DataError("day " + std::to_string(day) + " out of range, the model has " + std::to_string(samples) +
                    " days");
  }
  const std::string data_file = data_arg.empty() ? model.data_file : data_arg;
  if (data_file.empty()) throw UsageError("no data file recorded in the model; pass --data");
  const std::string label = model.day_labels[static_cast<std::size_t>(day)];
  const IngestResult ingested = ingest_for_model(data_file, model, flags);
  const SelectedDays days = select_days(ingested, {label}, data_file);

  const fs::path path = output_path(out_arg, "day_" + label + ".svg");
  write_file(path, render_day_svg(model, day, days.data.col(0)));
  out << "wrote " << path.string() << "\n";
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy disaggregation with fixed and shiftable loads", "disagg"};
  app.require_subcommand(1);

  std::string spec_file, synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset with ground truth");
  synth->add_option("--spec", spec_file, "Synthetic spec (JSON)")->required();
  synth->add_option("--out", synth_out, "Output directory");

  FitFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model and export the disaggregation");
  fit_cmd->add_option("--data", fit_flags.data, "Time-series CSV")->required();
  fit_cmd->add_option("--config", fit_flags.config, "Appliance config (JSON)")->required();
  fit_cmd->add_option("--out", fit_flags.out, "Output directory");
  fit_cmd->add_option("--seed", fit_flags.seed, "RNG seed");
  fit_cmd->add_option("--max-iters", fit_flags.max_iterations, "Iteration cap")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--tol", fit_flags.tol, "Relative objective change that counts as converged")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--update-rule", fit_flags.update_rule, "paper-kl or frobenius");
  fit_cmd->add_option("--sample-order", fit_flags.sample_order, "sequential or random");
  fit_cmd->add_option("--class-order", fit_flags.class_order, "sequential or random");
  fit_cmd->add_option("--threads", fit_flags.threads, "Worker threads for the shiftable sweep")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_flag("--verbose", fit_flags.verbose, "Print the objective after every iteration");
  fit_flags.ingest.add_to(*fit_cmd);

  std::string eval_model, eval_truth, eval_report;
  bool eval_json = false;
  IngestFlags eval_ingest;
  auto* eval_cmd = app.add_subcommand("eval", "Score an exported model against sub-metered truth");
  eval_cmd->add_option("--model", eval_model, "Directory written by fit")->required();
  eval_cmd->add_option("--truth", eval_truth, "Time-series CSV with appliance columns")->required();
  eval_cmd->add_flag("--json", eval_json, "Print the report as JSON");
  eval_cmd->add_option("--report", eval_report, "Also write the JSON report to this file");
  eval_cmd->add_option("--timestamp-column", eval_ingest.timestamp_column, "Timestamp column name");
  eval_cmd->add_option("--value-column", eval_ingest.value_column, "Aggregate energy column name");

  std::string plot_model, plot_out, plot_data;
  Index plot_day = 0;
  IngestFlags plot_ingest;
  auto* plot_cmd = app.add_subcommand("plot", "Draw one day of an exported model as SVG");
  plot_cmd->add_option("--model", plot_model, "Directory written by fit")->required();
  plot_cmd->add_option("--day", plot_day, "Day index, 0-based")->required();
  plot_cmd->add_option("--out", plot_out, "SVG file");
  plot_cmd->add_option("--data", plot_data, "Raw data CSV (defaults to the file recorded at fit time)");
  plot_cmd->add_option("--timestamp-column", plot_ingest.timestamp_column, "Timestamp column name");
  plot_cmd->add_option("--value-column", plot_ingest.value_column, "Aggregate energy column name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*synth) return cmd_synth(spec_file, synth_out, out);
    if (*fit_cmd) return cmd_fit(fit_flags, out, err);
    if (*eval_cmd) return cmd_eval(eval_model, eval_truth, eval_json, eval_report, eval_ingest, out);
    if (*plot_cmd) return cmd_plot(plot_model, plot_day, plot_out, plot_data, plot_ingest, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

}  // namespace disagg::cli
