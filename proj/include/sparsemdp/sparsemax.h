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

#ifndef SPARSEMDP_SPARSEMAX_H_
#define SPARSEMDP_SPARSEMAX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace sparsemdp {

// Euclidean projection of a score vector onto the probability simplex.
//
// With z sorted in descending order, the support has size
//   K = max{ k : 1 + k * z_(k) > z_(1) + ... + z_(k) }
// and the projection is probs[i] = max(z[i] - tau, 0) with
//   tau = (z_(1) + ... + z_(K) - 1) / K.
struct SparsemaxResult {
  std::vector<double> probs;
  // Indices with probs[i] > 0, ascending.
  std::vector<std::size_t> support;
  double tau = 0.0;
  // spmax(z) = 1/2 * sum_{i in support} (z_i^2 - tau^2) + 1/2.
  double spmax_value = 0.0;
};

// Throws std::invalid_argument on an empty or non-finite input.
SparsemaxResult sparsemax(std::span<const double> z);

// Smooth upper approximation of max(z):
//   max(z) <= spmax(z) <= max(z) + (d - 1) / (2d).
double spmax(std::span<const double> z);

// alpha * spmax(z / alpha). Throws std::invalid_argument if alpha <= 0.
double scaled_spmax(std::span<const double> z, double alpha);

// exp(z / alpha) / sum(exp(z / alpha)), evaluated with the max subtracted.
std::vector<double> softmax_distribution(std::span<const double> z,
                                         double alpha);

// alpha * log(sum(exp(z / alpha))).
double log_sum_exp(std::span<const double> z, double alpha);

}  // namespace sparsemdp

#endif  // SPARSEMDP_SPARSEMAX_H_
