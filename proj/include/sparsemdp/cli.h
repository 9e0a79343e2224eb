// Copyright 2026 The sparsemdp Authors. All rights reserved.
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

#ifndef SPARSEMDP_CLI_H_
#define SPARSEMDP_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace sparsemdp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotConverged = 2;

// Runs the command line `args` (args[0] is the program name). Subcommands:
// solve, evaluate, qlearn, gap-sweep, support-sweep, gen-env. Human summaries
// go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sparsemdp

#endif  // SPARSEMDP_CLI_H_
