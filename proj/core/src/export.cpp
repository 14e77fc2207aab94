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

#include "disagg/export.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "disagg/csv.hpp"
#include "disagg/error.hpp"
#include "disagg/objective.hpp"
#include "json_util.hpp"

namespace disagg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "disagg-report/1";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

std::vector<double> read_trace(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<double> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const auto v = comma == std::string::npos ? std::nullopt
                                              : parse_double(std::string_view(line).substr(comma + 1));
    if (!v) throw DataError(path.string() + ": malformed trace row '" + line + "'");
    trace.push_back(*v);
  }
  return trace;
}

}  // namespace

std::string class_file_name(std::size_t index, std::string_view class_name) {
  std::string stem;
  for (char c : class_name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    stem.push_back(ok ? c : '_');
  }
  return "class_" + std::to_string(index) + "_" + stem + ".csv";
}

void export_disaggregation(const DisaggregationModel& model, const EnergyDataset& dataset,
                           const FitReport* report, const fs::path& out_dir,
                           const ExportOptions& options) {
  validate(model);
  validate(dataset);
  if (model.rows() != dataset.rows() || model.samples() != dataset.samples()) {
    throw DimensionError("model and dataset shapes differ");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw DataError("cannot create output directory " + out_dir.string());
  }

  const Disaggregation parts = disaggregate(model);
  const auto& labels = dataset.day_labels;
  write_matrix_csv(out_dir / "fixed.csv", parts.fixed, labels);
  json classes = json::array();
  for (std::size_t j = 0; j < parts.classes.size(); ++j) {
    const auto& load = model.shiftable[j];
    const std::string file = class_file_name(j, load.name);
    write_matrix_csv(out_dir / file, parts.classes[j].values, labels);
    classes.push_back({{"name", load.name},
                       {"peak", load.peak},
                       {"l0_budget", load.l0_budget},
                       {"basis_columns", load.basis.cols()},
                       {"file", file}});
  }
  write_matrix_csv(out_dir / "aggregate.csv", parts.aggregate, labels);

  std::vector<double> trace;
  if (report) {
    trace = report->objective_trace;
  } else {
    trace.push_back(frobenius_objective(dataset.values, parts.aggregate).total);
  }
  std::string trace_text = "iteration,objective\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    trace_text += std::to_string(i) + "," + format_double(trace[i]) + "\n";
  }
  write_text(out_dir / "objective_trace.csv", trace_text);

  json doc{{"format", kFormat},
           {"rows", dataset.rows()},
           {"samples", dataset.samples()},
           {"interval_minutes", dataset.interval_minutes},
           {"day_labels", labels},
           {"data_file", options.data_file},
           {"files",
            {{"fixed", "fixed.csv"},
             {"aggregate", "aggregate.csv"},
             {"objective_trace", "objective_trace.csv"}}},
           {"classes", classes},
           {"final_objective", trace.back()}};
  if (report) {
    doc["fit"] = {{"iterations_run", report->iterations_run},
                  {"termination", std::string(to_string(report->termination))},
                  {"objective_trace", report->objective_trace},
                  {"config", detail::config_to_json(report->config)}};
  }
  write_text(out_dir / "report.json", doc.dump(2) + "\n");
}

LoadedDisaggregation read_disaggregation(const fs::path& dir) {
  const fs::path report_path = dir / "report.json";
  if (!fs::exists(report_path)) throw DataError("no report.json in " + dir.string());
  json doc;
  try {
    doc = json::parse(detail::read_text_file(report_path));
  } catch (const json::exception& e) {
    throw DataError(report_path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw DataError(e.what());
  }
  if (doc.value("format", std::string()) != kFormat) {
    throw DataError(report_path.string() + ": unsupported report format");
  }

  LoadedDisaggregation out;
  try {
    out.day_labels = doc.at("day_labels").get<std::vector<std::string>>();
    out.interval_minutes = doc.at("interval_minutes").get<int>();
    out.data_file = doc.value("data_file", std::string());
    for (const auto& c : doc.at("classes")) {
      out.classes.push_back({c.at("name").get<std::string>(), c.at("peak").get<double>(),
                             c.at("l0_budget").get<int>(), c.at("file").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw DataError(report_path.string() + ": " + e.what());
  }

  auto load = [&](const std::string& file) {
    auto m = read_matrix_csv(dir / file);
    if (m.day_labels != out.day_labels) {
      throw DataError(file + ": day labels do not match report.json");
    }
    return std::move(m.values);
  };
  out.parts.fixed = load("fixed.csv");
  out.parts.aggregate = load("aggregate.csv");
  for (const auto& c : out.classes) out.parts.classes.push_back({c.name, c.peak, load(c.file)});
  out.objective_trace = read_trace(dir / "objective_trace.csv");
  return out;
}

}  // namespace disagg
