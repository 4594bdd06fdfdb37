// Copyright 2026 The ROAR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roar::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataOrConfig = 2,
  kNumerical = 3,
};

// Entry point for the `roar` tool. Subcommands: generate-data, train,
// recourse, evaluate, sweep, verify-theory. Diagnostics go to `err` as a
// single line; help and usage text go to `out`/`err` respectively.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace roar::cli
