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

#include "disagg/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "disagg/error.hpp"

namespace disagg {

namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

constexpr int kMinutesPerDay = 1440;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

template <typename T>
bool parse_int(std::string_view text, T& out) {
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string two_digits(int v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}

std::string line_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void validate(const ApplianceGroundTruth& truth, const EnergyDataset& dataset) {
  if (truth.names.size() != truth.usage.size()) {
    throw DataError("ground truth has mismatched name and matrix counts");
  }
  for (std::size_t i = 0; i < truth.names.size(); ++i) {
    const auto& m = truth.usage[i];
    if (m.rows() != dataset.rows() || m.cols() != dataset.samples()) {
      throw DataError("ground truth '" + truth.names[i] + "' is " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + ", dataset is " +
                      std::to_string(dataset.rows()) + "x" + std::to_string(dataset.samples()));
    }
    if (!m.allFinite() || (m.size() > 0 && m.minCoeff() < 0.0)) {
      throw DataError("ground truth '" + truth.names[i] + "' has negative or non-finite entries");
    }
  }
}

std::optional<year_month_day> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (!all_digits(text.substr(0, 4)) || !all_digits(text.substr(5, 2)) ||
      !all_digits(text.substr(8, 2)) || !parse_int(text.substr(0, 4), y) ||
      !parse_int(text.substr(5, 2), m) || !parse_int(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  const year_month_day date{year{y}, month{m}, day{d}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(year_month_day date) {
  std::string y = std::to_string(static_cast<int>(date.year()));
  while (y.size() < 4) y.insert(y.begin(), '0');
  return y + "-" + two_digits(static_cast<int>(static_cast<unsigned>(date.month()))) + "-" +
         two_digits(static_cast<int>(static_cast<unsigned>(date.day())));
}

bool is_weekend(year_month_day date) {
  const std::chrono::weekday wd{sys_days{date}};
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

std::optional<CivilTimestamp> parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.size() < 16) return std::nullopt;
  const auto date = parse_date(text.substr(0, 10));
  if (!date || (text[10] != 'T' && text[10] != ' ')) return std::nullopt;
  std::string_view rest = text.substr(11);

  int hour = 0;
  int minute = 0;
  int second = 0;
  if (rest.size() < 5 || rest[2] != ':' || !all_digits(rest.substr(0, 2)) ||
      !all_digits(rest.substr(3, 2))) {
    return std::nullopt;
  }
  parse_int(rest.substr(0, 2), hour);
  parse_int(rest.substr(3, 2), minute);
  rest.remove_prefix(5);
  if (!rest.empty() && rest[0] == ':') {
    if (rest.size() < 3 || !all_digits(rest.substr(1, 2))) return std::nullopt;
    parse_int(rest.substr(1, 2), second);
    rest.remove_prefix(3);
    if (!rest.empty() && rest[0] == '.') {
      std::size_t i = 1;
      while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
      if (i == 1) return std::nullopt;
      rest.remove_prefix(i);
    }
  }
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

  // Zone designator: accepted, not applied.
  if (!rest.empty()) {
    if (rest == "Z") {
      rest = {};
    } else if (rest[0] == '+' || rest[0] == '-') {
      const std::string_view zone = rest.substr(1);
      const bool ok = (zone.size() == 2 && all_digits(zone)) ||
                      (zone.size() == 4 && all_digits(zone)) ||
                      (zone.size() == 5 && zone[2] == ':' && all_digits(zone.substr(0, 2)) &&
                       all_digits(zone.substr(3, 2)));
      if (!ok) return std::nullopt;
    } else {
      return std::nullopt;
    }
  }
  return CivilTimestamp{*date, hour * 60 + minute, second};
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw DataError("cannot format number");
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

IngestResult ingest_csv(std::istream& in, const IngestOptions& options) {
  if (options.interval_minutes <= 0 || kMinutesPerDay % options.interval_minutes != 0) {
    throw ConfigError("interval_minutes must divide 1440, got " +
                      std::to_string(options.interval_minutes));
  }
  const Index slots = kMinutesPerDay / options.interval_minutes;

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto f : split(line, options.delimiter)) header.emplace_back(f);
    break;
  }
  if (header.empty()) throw DataError("input has no header row");

  auto column_of = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("input has no column named '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ts_col = column_of(options.timestamp_column);
  const std::size_t value_col = column_of(options.value_column);

  std::vector<std::size_t> app_cols;
  std::vector<std::string> app_names;
  if (options.appliance_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == ts_col || c == value_col) continue;
      app_cols.push_back(c);
      app_names.push_back(header[c]);
    }
  } else {
    for (const auto& name : options.appliance_columns) {
      app_cols.push_back(column_of(name));
      app_names.push_back(name);
    }
  }

  struct DayBuffer {
    Eigen::VectorXd value;
    Eigen::MatrixXd appliances;
    std::vector<char> seen;
    Index filled = 0;
  };
  std::map<int, DayBuffer> days;           // keyed by days since epoch
  std::map<int, std::string> filtered;     // day -> reason

  auto read_number = [&](std::string_view field, const std::string& column) {
    const auto v = parse_double(field);
    if (!v || !std::isfinite(*v)) {
      throw DataError(line_error(line_no, "cannot parse '" + std::string(field) + "' in column '" +
                                              column + "'"));
    }
    if (*v < 0.0) {
      throw DataError(line_error(line_no, "negative reading in column '" + column + "'"));
    }
    return *v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, options.delimiter);
    if (fields.size() != header.size()) {
      throw DataError(line_error(line_no, "expected " + std::to_string(header.size()) +
                                              " fields, found " + std::to_string(fields.size())));
    }
    const auto ts = parse_timestamp(fields[ts_col]);
    if (!ts) {
      throw DataError(line_error(line_no, "malformed timestamp '" + std::string(fields[ts_col]) + "'"));
    }
    if (ts->second != 0 || ts->minute_of_day % options.interval_minutes != 0) {
      throw DataError(line_error(line_no, "timestamp not aligned to a " +
                                              std::to_string(options.interval_minutes) +
                                              "-minute interval"));
    }
    const int key = static_cast<int>(sys_days{ts->date}.time_since_epoch().count());
    if ((options.first_day && ts->date < *options.first_day) ||
        (options.last_day && ts->date > *options.last_day)) {
      filtered.emplace(key, "outside date range");
      continue;
    }
    if (options.weekday_filter && is_weekend(ts->date)) {
      filtered.emplace(key, "weekend");
      continue;
    }

    auto [it, inserted] = days.try_emplace(key);
    auto& buf = it->second;
    if (inserted) {
      buf.value = Eigen::VectorXd::Zero(slots);
      buf.appliances = Eigen::MatrixXd::Zero(slots, static_cast<Index>(app_cols.size()));
      buf.seen.assign(static_cast<std::size_t>(slots), 0);
    }
    const Index slot = ts->minute_of_day / options.interval_minutes;
    if (buf.seen[static_cast<std::size_t>(slot)]) {
      throw DataError(line_error(line_no, "duplicate timestamp '" + std::string(fields[ts_col]) + "'"));
    }
    buf.seen[static_cast<std::size_t>(slot)] = 1;
    ++buf.filled;
    buf.value(slot) = read_number(fields[value_col], header[value_col]);
    for (std::size_t a = 0; a < app_cols.size(); ++a) {
      buf.appliances(slot, static_cast<Index>(a)) = read_number(fields[app_cols[a]], app_names[a]);
    }
  }

  auto label_of = [](int key) {
    return format_date(year_month_day{sys_days{std::chrono::days{key}}});
  };

  IngestResult result;
  std::vector<int> kept;
  std::map<int, std::string> rejected = filtered;
  for (const auto& [key, buf] : days) {
    if (buf.filled == slots) {
      kept.push_back(key);
    } else {
      rejected[key] = "incomplete: " + std::to_string(buf.filled) + " of " +
                      std::to_string(slots) + " intervals";
    }
  }
  for (const auto& [key, reason] : rejected) result.rejected.push_back({label_of(key), reason});
  if (kept.empty()) throw DataError("no complete day survived ingestion");

  auto& ds = result.dataset;
  ds.interval_minutes = options.interval_minutes;
  ds.values.resize(slots, static_cast<Index>(kept.size()));
  result.truth.names = app_names;
  result.truth.usage.assign(app_names.size(),
                            Eigen::MatrixXd(slots, static_cast<Index>(kept.size())));
  for (std::size_t n = 0; n < kept.size(); ++n) {
    const auto& buf = days.at(kept[n]);
    const auto col = static_cast<Index>(n);
    ds.day_labels.push_back(label_of(kept[n]));
    ds.values.col(col) = buf.value;
    for (std::size_t a = 0; a < app_names.size(); ++a) {
      result.truth.usage[a].col(col) = buf.appliances.col(static_cast<Index>(a));
    }
  }
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return ingest_csv(in, options);
}

void write_timeseries_csv(const std::filesystem::path& path, const EnergyDataset& dataset,
                          const ApplianceGroundTruth& truth) {
  validate(dataset);
  if (!truth.empty()) validate(truth, dataset);
  if (dataset.interval_minutes * dataset.rows() != kMinutesPerDay) {
    throw DataError("dataset does not cover a 1440-minute day");
  }
  std::vector<std::string> dates;
  for (const auto& label : dataset.day_labels) {
    if (!parse_date(label)) throw DataError("day label '" + label + "' is not an ISO date");
    dates.push_back(label);
  }
  auto out = open_output(path);
  out << "timestamp,kWh";
  for (const auto& name : truth.names) out << ',' << name;
  out << '\n';
  for (Index n = 0; n < dataset.samples(); ++n) {
    for (Index d = 0; d < dataset.rows(); ++d) {
      const int minute = static_cast<int>(d) * dataset.interval_minutes;
      out << dates[static_cast<std::size_t>(n)] << 'T' << two_digits(minute / 60) << ':'
          << two_digits(minute % 60) << ":00," << format_double(dataset.values(d, n));
      for (const auto& m : truth.usage) out << ',' << format_double(m(d, n));
      out << '\n';
    }
  }
  if (!out) throw DataError("failed writing " + path.string());
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& day_labels) {
  if (static_cast<Index>(day_labels.size()) != values.cols()) {
    throw DimensionError("matrix has " + std::to_string(values.cols()) + " columns but " +
                         std::to_string(day_labels.size()) + " labels");
  }
  auto out = open_output(path);
  out << "interval";
  for (const auto& label : day_labels) out << ',' << label;
  out << '\n';
  for (Index d = 0; d < values.rows(); ++d) {
    out << d;
    for (Index n = 0; n < values.cols(); ++n) out << ',' << format_double(values(d, n));
    out << '\n';
  }
  if (!out) throw DataError("failed writing " + path.string());
}

LabeledMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  auto header = split(line, ',');
  if (header.empty() || header[0] != "interval") {
    throw DataError(path.string() + ": header must start with 'interval'");
  }
  LabeledMatrix result;
  for (std::size_t i = 1; i < header.size(); ++i) result.day_labels.emplace_back(header[i]);
  const auto cols = static_cast<Index>(result.day_labels.size());

  std::vector<double> flat;
  Index rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    Index index = -1;
    if (static_cast<Index>(fields.size()) != cols + 1 || !parse_int(fields[0], index) ||
        index != rows) {
      throw DataError(path.string() + ": " + line_error(line_no, "malformed matrix row"));
    }
    for (Index n = 0; n < cols; ++n) {
      const auto v = parse_double(fields[static_cast<std::size_t>(n + 1)]);
      if (!v) throw DataError(path.string() + ": " + line_error(line_no, "malformed number"));
      flat.push_back(*v);
    }
    ++rows;
  }
  result.values.resize(rows, cols);
  for (Index d = 0; d < rows; ++d) {
    for (Index n = 0; n < cols; ++n) result.values(d, n) = flat[static_cast<std::size_t>(d * cols + n)];
  }
  return result;
}

}  // namespace disagg
