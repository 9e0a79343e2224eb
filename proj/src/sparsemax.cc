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

#include "sparsemdp/sparsemax.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace sparsemdp {
namespace {

void check_input(std::span<const double> z) {
  if (z.empty()) {
    throw std::invalid_argument("sparsemax: input vector is empty");
  }
  for (double v : z) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("sparsemax: input contains a non-finite value");
    }
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive");
  }
}

struct Threshold {
  double tau;
  std::size_t k;
};

// `sorted` holds z in descending order. Ties carry equal values, so the order
// among them cannot affect tau.
Threshold threshold_of_sorted(std::span<const double> sorted) {
  double cumsum = 0.0;
  double support_sum = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumsum += sorted[i];
    const double rank = static_cast<double>(i + 1);
    // Strict inequality: an entry equal to tau gets zero mass.
    if (1.0 + rank * sorted[i] > cumsum) {
      k = i + 1;
      support_sum = cumsum;
    }
  }
  // k >= 1 always: the first entry satisfies 1 + z_(1) > z_(1).
  return {(support_sum - 1.0) / static_cast<double>(k), k};
}

std::vector<double> sorted_descending(std::span<const double> z) {
  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  return sorted;
}

// tau + (1 + sum p_i^2) / 2, which equals the defining expression
// 1/2 sum (z_i^2 - tau^2) + 1/2 because p_i = z_i - tau on the support and
// sum p_i = 1. This form avoids cancellation between z_i^2 and tau^2.
double spmax_of_sorted(std::span<const double> sorted, const Threshold& t) {
  // A single supported entry carries all the mass: the value is exactly z_(1).
  if (t.k == 1) return sorted[0];
  double sq = 0.0;
  for (std::size_t i = 0; i < t.k; ++i) {
    const double p = std::max(sorted[i] - t.tau, 0.0);
    sq += p * p;
  }
  return t.tau + 0.5 * (1.0 + sq);
}

}  // namespace

SparsemaxResult sparsemax(std::span<const double> z) {
  check_input(z);
  const std::vector<double> sorted = sorted_descending(z);
  const Threshold t = threshold_of_sorted(sorted);

  SparsemaxResult result;
  result.tau = t.tau;
  result.probs.resize(z.size());
  double total = 0.0;
  double scale = 1.0;
  // Membership follows the scan (z_i >= z_(K); ties at z_(K) all pass the
  // condition), so rounding in z_i - tau cannot add entries. With K = 1 the
  // top entry is unique and takes exactly unit mass.
  const double kth = sorted[t.k - 1];
  for (std::size_t i = 0; i < z.size(); ++i) {
    double p = 0.0;
    if (z[i] >= kth) p = t.k == 1 ? 1.0 : std::max(z[i] - t.tau, 0.0);
    result.probs[i] = p;
    total += p;
    if (p > 0.0) result.support.push_back(i);
    scale = std::max(scale, std::abs(z[i]));
  }
  // Not renormalized: a deviation beyond rounding means the threshold is wrong.
  if (std::abs(total - 1.0) > 1e-9 * scale) {
    throw std::logic_error("sparsemax: projection sums to " +
                           std::to_string(total));
  }
  result.spmax_value = spmax_of_sorted(sorted, t);
  return result;
}

double spmax(std::span<const double> z) {
  check_input(z);
  const std::vector<double> sorted = sorted_descending(z);
  return spmax_of_sorted(sorted, threshold_of_sorted(sorted));
}

double scaled_spmax(std::span<const double> z, double alpha) {
  check_alpha(alpha);
  check_input(z);
  std::vector<double> scaled(z.begin(), z.end());
  for (double& v : scaled) v /= alpha;
  std::sort(scaled.begin(), scaled.end(), std::greater<>());
  const Threshold t = threshold_of_sorted(scaled);
  // alpha * max(z / alpha) is max(z); skip the round trip through the scaling.
  if (t.k == 1) return *std::max_element(z.begin(), z.end());
  return alpha * spmax_of_sorted(scaled, t);
}

std::vector<double> softmax_distribution(std::span<const double> z,
                                         double alpha) {
  check_alpha(alpha);
  check_input(z);
  const double top = *std::max_element(z.begin(), z.end());
  std::vector<double> out(z.size());
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp((z[i] - top) / alpha);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

double log_sum_exp(std::span<const double> z, double alpha) {
  check_alpha(alpha);
  check_input(z);
  const double top = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double v : z) total += std::exp((v - top) / alpha);
  return top + alpha * std::log(total);
}

}  // namespace sparsemdp
