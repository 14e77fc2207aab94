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

// CSV input and output.
//
// Time-series input has a header row and one row per interval:
//
//   timestamp,kWh[,<appliance>...]
//   2019-04-01T00:00:00,0.412,0.0,...
//
// Timestamps are ISO-8601 local civil times, "T" or a space between date and
// time, optional seconds, optional "Z" or +HH[:MM] / -HH[:MM] suffix. The
// suffix is accepted but ignored: days and weekdays follow the date as
// written. Extra columns are sub-metered appliance readings used as ground
// truth. Column names for timestamp and value are configurable, e.g. a Pecan
// Street Dataport export maps as timestamp="localminute", value="use".
//
// Matrix output has a header "interval,<day label>..." and one row per
// interval index; numbers use the shortest decimal form that reads back to
// the same double.

#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "disagg/model.hpp"

namespace disagg {

// Sub-metered per-appliance usage aligned with an EnergyDataset.
struct ApplianceGroundTruth {
  std::vector<std::string> names;
  std::vector<Eigen::MatrixXd> usage;  // one D x N matrix per name

  bool empty() const { return names.empty(); }
};

// Throws DataError on shape mismatch with `dataset` or negative entries.
void validate(const ApplianceGroundTruth& truth, const EnergyDataset& dataset);

struct CivilTimestamp {
  std::chrono::year_month_day date;
  int minute_of_day = 0;
  int second = 0;
};

std::optional<CivilTimestamp> parse_timestamp(std::string_view text);
std::string format_date(std::chrono::year_month_day date);
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);
bool is_weekend(std::chrono::year_month_day date);

struct IngestOptions {
  int interval_minutes = 1;
  std::optional<std::chrono::year_month_day> first_day;
  std::optional<std::chrono::year_month_day> last_day;
  bool weekday_filter = false;
  std::string timestamp_column = "timestamp";
  std::string value_column = "kWh";
  // Empty means every remaining column is read as ground truth.
  std::vector<std::string> appliance_columns;
  char delimiter = ',';
};

struct RejectedDay {
  std::string label;
  std::string reason;
};

struct IngestResult {
  EnergyDataset dataset;
  ApplianceGroundTruth truth;
  std::vector<RejectedDay> rejected;  // chronological
};

// Groups rows into days of 1440 / interval_minutes slots, drops days outside
// the date range or on weekends (when filtering), and rejects incomplete days.
// Throws DataError with the line number for malformed, misaligned or
// duplicate rows, and when no day survives.
IngestResult ingest_csv(std::istream& in, const IngestOptions& options);
IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options);

// Writes the time-series format above. Day labels must be ISO dates.
void write_timeseries_csv(const std::filesystem::path& path, const EnergyDataset& dataset,
                          const ApplianceGroundTruth& truth);

std::string format_double(double value);
std::optional<double> parse_double(std::string_view text);

struct LabeledMatrix {
  std::vector<std::string> day_labels;
  Eigen::MatrixXd values;
};

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& day_labels);
LabeledMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace disagg
