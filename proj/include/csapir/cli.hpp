// Copyright 2026 The csapir Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace csapir::cli {

enum ExitCode : int {
  kOk = 0,
  kConstraint = 1,
  kDecodeFailure = 2,
  kIo = 3,
};

// Subcommands: retrieve, sweep, audit, psdmm, rates. `args` excludes the
// program name. `--config file.json` supplies values for any flag that is
// not given on the command line; keys are flag names without dashes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csapir::cli
