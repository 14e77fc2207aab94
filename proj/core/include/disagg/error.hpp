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

#pragma once

#include <stdexcept>
#include <string>

namespace disagg {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix shapes of two components disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A ModelConfig, appliance config or synthesis spec is invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data is malformed, incomplete or cannot be read/written.
class DataError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite objective.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace disagg
