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


#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "disagg/error.hpp"

namespace disagg::cli {

namespace {

constexpr double kWidth = 960.0;
constexpr double kPanelHeight = 170.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 28.0;
constexpr double kBottom = 22.0;

struct Series {
  std::string label;
  std::string color;
  Eigen::VectorXd values;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void panel(std::ostream& out, double y0, const std::string& title, const std::vector<Series>& series) {
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kPanelHeight - kTop - kBottom;
  double top = 0.0;
  for (const auto& s : series) top = std::max(top, s.values.maxCoeff());
  if (!(top > 0.0)) top = 1.0;
  const Index rows = series.front().values.size();

  out << "<g class=\"panel\" transform=\"translate(0," << num(y0) << ")\">\n";
  out << "<text x=\"" << num(kLeft) << "\" y=\"18\" font-size=\"13\">" << escape(title) << "</text>\n";
  out << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#999\"/>\n";
  out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(kTop + 4) << "\" font-size=\"10\" text-anchor=\"end\">"
      << num(top) << "</text>\n";
  out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(kTop + plot_h) << "\" font-size=\"10\" text-anchor=\"end\">0</text>\n";
  for (int h = 0; h <= 24; h += 6) {
    const double x = kLeft + plot_w * h / 24.0;
    out << "<text x=\"" << num(x) << "\" y=\"" << num(kTop + plot_h + 14) << "\" font-size=\"10\" text-anchor=\"middle\">"
        << h << ":00</text>\n";
  }
  double legend_x = kWidth - kRight;
  for (auto it = series.rbegin(); it != series.rend(); ++it) {
    legend_x -= 8.0 * static_cast<double>(it->label.size()) + 24.0;
    out << "<text x=\"" << num(legend_x) << "\" y=\"18\" font-size=\"11\" fill=\"" << it->color << "\">"
        << escape(it->label) << "</text>\n";
  }
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\" points=\"";
    for (Index d = 0; d < rows; ++d) {
      const double x = kLeft + plot_w * (static_cast<double>(d) + 0.5) / static_cast<double>(rows);
      const double y = kTop + plot_h * (1.0 - s.values(d) / top);
      out << (d ? " " : "") << num(x) << "," << num(y);
    }
    out << "\"/>\n";
  }
  out << "</g>\n";
}

}  // namespace

std::string render_day_svg(const LoadedDisaggregation& model, Index day, const Eigen::VectorXd& raw) {
  const auto& parts = model.parts;
  const Index samples = parts.aggregate.cols();
  if (day < 0 || day >= samples) {
    throw DataError("day index " + std::to_string(day) + " out of range [0, " + std::to_string(samples) + ")");
  }
  if (raw.size() != parts.aggregate.rows()) throw DimensionError("raw data length differs from model rows");

  Eigen::VectorXd shiftable = Eigen::VectorXd::Zero(parts.aggregate.rows());
  for (const auto& c : parts.classes) shiftable += c.values.col(day);

  const std::string label = model.day_labels[static_cast<std::size_t>(day)];
  const auto panels = 2 + parts.classes.size();
  const double height = kPanelHeight * static_cast<double>(panels);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(kWidth) << " " << num(height) << "\" font-family=\"sans-serif\">\n";
  out << "<title>" << escape(label) << "</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  double y = 0.0;
  panel(out, y, label + " fixed and shiftable loads",
        {{"fixed", "#1f77b4", parts.fixed.col(day)}, {"shiftable", "#d62728", shiftable}});
  y += kPanelHeight;
  panel(out, y, label + " aggregate",
        {{"data", "#7f7f7f", raw}, {"reconstruction", "#2ca02c", parts.aggregate.col(day)}});
  for (const auto& c : parts.classes) {
    y += kPanelHeight;
    panel(out, y, c.name + " (peak " + num(c.peak) + ")", {{c.name, "#9467bd", c.values.col(day)}});
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace disagg::cli
