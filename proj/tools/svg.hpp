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


// Per-day plot of an exported disaggregation as a standalone SVG document.
//
// Panels, top to bottom: fixed load against the summed shiftable loads,
// reconstructed aggregate over the raw data, then one panel per class. Each
// panel is a <g class="panel"> element.

#pragma once

#include <string>

#include <Eigen/Core>

#include "disagg/export.hpp"

namespace disagg::cli {

// `raw` is the measured day, same length as the model rows. Throws
// DataError when `day` is out of range.
std::string render_day_svg(const LoadedDisaggregation& model, Index day, const Eigen::VectorXd& raw);

}  // namespace disagg::cli
