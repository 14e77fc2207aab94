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

// Export of a fitted model as a directory of files:
//
//   fixed.csv               Wf * Hf
//   class_<i>_<name>.csv    peak_i * Ws_i * Hs_i, one per shiftable class
//   aggregate.csv           Xtilde
//   objective_trace.csv     iteration,objective
//   report.json             shapes, day labels, class table, fit report
//
// Matrix files use the format of write_matrix_csv(). The report carries no
// wall-clock time, so identical runs export identical bytes.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "disagg/model.hpp"
#include "disagg/trainer.hpp"

namespace disagg {

struct ExportOptions {
  // Recorded in report.json so later commands can find the raw data.
  std::string data_file;
};

// Creates `out_dir` if needed. Without a fit report the trace holds the
// single objective value of `model` on `dataset`.
void export_disaggregation(const DisaggregationModel& model, const EnergyDataset& dataset,
                           const FitReport* report, const std::filesystem::path& out_dir,
                           const ExportOptions& options = {});

struct ExportedClass {
  std::string name;
  double peak = 1.0;
  int l0_budget = 1;
  std::string file;
};

struct LoadedDisaggregation {
  std::vector<std::string> day_labels;
  int interval_minutes = 1;
  std::vector<ExportedClass> classes;
  Disaggregation parts;
  std::vector<double> objective_trace;
  std::string data_file;
};

LoadedDisaggregation read_disaggregation(const std::filesystem::path& dir);

// "class_<index>_<name>.csv" with characters outside [A-Za-z0-9_-] replaced.
std::string class_file_name(std::size_t index, std::string_view class_name);

}  // namespace disagg
