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


// The `disagg` command line:
//
//   disagg synth --spec FILE [--out DIR]
//   disagg fit   --data FILE --config FILE [--out DIR] [overrides...]
//   disagg eval  --model DIR --truth FILE [--json] [--report FILE]
//   disagg plot  --model DIR --day INDEX [--out FILE] [--data FILE]
//
// When --out is omitted the DISAGG_OUT_DIR environment variable supplies the
// output directory. Exit codes: 0 success, 1 usage or configuration error,
// 2 data error, 3 numerical failure.

#pragma once

#include <iosfwd>

namespace disagg::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kData = 2, kNumerical = 3 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace disagg::cli
