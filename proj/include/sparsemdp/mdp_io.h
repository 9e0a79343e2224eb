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

// JSON MDP documents:
//
//   {
//     "n_states": 2, "n_actions": 1, "gamma": 0.9,
//     "initial_dist": [1.0, 0.0],
//     "reward": [1.0, 0.0],                  // row-major |S| x |A|
//     "transitions": [{"s": 0, "a": 0, "sp": 1, "p": 1.0}, ...]
//   }
//
// Omitted (s, a, s') triples have probability 0. "reward" may also be given
// as an array of |S| rows. Rows must sum to 1 within kFileRowTolerance.

#ifndef SPARSEMDP_MDP_IO_H_
#define SPARSEMDP_MDP_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>

#include "sparsemdp/mdp.h"

namespace sparsemdp {

inline constexpr double kFileRowTolerance = 1e-6;

// Malformed document; the message names the offending field or the parse
// position.
class MdpFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

TabularMdp parse_mdp(const std::string& text);
TabularMdp load_mdp(const std::filesystem::path& path);

std::string serialize_mdp(const TabularMdp& mdp);
void save_mdp(const TabularMdp& mdp, const std::filesystem::path& path);

}  // namespace sparsemdp

#endif  // SPARSEMDP_MDP_IO_H_
