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


#include "oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include <unistd.h>

namespace disagg::testing {

Eigen::MatrixXd naive_matmul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

Eigen::MatrixXd naive_reconstruct(const DisaggregationModel& model) {
  Eigen::MatrixXd x = naive_matmul(model.fixed.basis, model.fixed.weights);
  for (const auto& load : model.shiftable) {
    const Eigen::MatrixXd w = load.basis.to_dense();
    const Eigen::MatrixXd h = load.weights.cast<double>();
    x += load.peak * naive_matmul(w, h);
  }
  return x;
}

double gaussian_log_density(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return std::log(std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi)));
}

double generalized_kl(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  double s = 0.0;
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      const double a = x(i, j);
      const double b = y(i, j);
      s += (a > 0.0 ? a * std::log(a / b) : 0.0) - a + b;
    }
  }
  return s;
}

std::vector<Index> threshold_oracle(const Eigen::VectorXd& r, int budget) {
  std::vector<Index> idx;
  for (Index d = 0; d < r.size(); ++d) {
    if (r(d) > 0.5) idx.push_back(d);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return r(a) > r(b); });
  if (static_cast<int>(idx.size()) > budget) idx.resize(static_cast<std::size_t>(budget));
  std::sort(idx.begin(), idx.end());
  return idx;
}

SparseBinaryBasis random_basis(std::mt19937_64& rng, Index rows, Index cols, Index max_support) {
  std::vector<std::vector<Index>> sets;
  std::vector<Index> all(static_cast<std::size_t>(rows));
  std::iota(all.begin(), all.end(), Index{0});
  std::uniform_int_distribution<Index> size(1, std::min(max_support, rows));
  for (Index k = 0; k < cols; ++k) {
    std::shuffle(all.begin(), all.end(), rng);
    sets.emplace_back(all.begin(), all.begin() + size(rng));
  }
  return SparseBinaryBasis(rows, std::move(sets));
}

Eigen::VectorXd random_uniform(std::mt19937_64& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("disagg_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace disagg::testing
