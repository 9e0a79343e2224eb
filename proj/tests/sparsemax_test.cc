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

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"

namespace sparsemdp {
namespace {

using Vec = std::vector<double>;

TEST(SparsemaxTest, LargeGapGivesDeterministicProjection) {
  const SparsemaxResult r = sparsemax(Vec{2.0, 0.0});
  EXPECT_EQ(r.probs, (Vec{1.0, 0.0}));
  EXPECT_EQ(r.support, (std::vector<std::size_t>{0}));
  EXPECT_DOUBLE_EQ(r.tau, 1.0);
}

TEST(SparsemaxTest, ConstantVectorIsUniform) {
  for (double c : {-3.5, 0.0, 7.25}) {
    const SparsemaxResult r = sparsemax(Vec(5, c));
    for (double p : r.probs) EXPECT_NEAR(p, 0.2, 1e-15);
    EXPECT_EQ(r.support.size(), 5u);
  }
}

TEST(SparsemaxTest, PartialSupportMatchesOracle) {
  const Vec z{0.6, 0.4, 0.0};
  const SparsemaxResult r = sparsemax(z);
  const oracle::Projection o = oracle::project_simplex_exhaustive(z);
  EXPECT_NEAR(r.tau, 0.0, 1e-15);
  EXPECT_EQ(r.support, (std::vector<std::size_t>{0, 1}));
  for (std::size_t i = 0; i < z.size(); ++i) {
    EXPECT_NEAR(r.probs[i], o.probs[i], 1e-15);
  }
  EXPECT_NEAR(o.probs[0], 0.6, 1e-15);
  EXPECT_NEAR(o.probs[1], 0.4, 1e-15);
  EXPECT_EQ(o.probs[2], 0.0);
}

TEST(SparsemaxTest, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(sparsemax(Vec{}), std::invalid_argument);
  EXPECT_THROW(sparsemax(Vec{1.0, std::numeric_limits<double>::quiet_NaN()}),
               std::invalid_argument);
  EXPECT_THROW(sparsemax(Vec{std::numeric_limits<double>::infinity()}),
               std::invalid_argument);
  EXPECT_THROW(spmax(Vec{}), std::invalid_argument);
}

TEST(SparsemaxTest, TiesShareTheSupport) {
  const SparsemaxResult r = sparsemax(Vec{1.0, 1.0, -5.0});
  EXPECT_DOUBLE_EQ(r.probs[0], 0.5);
  EXPECT_DOUBLE_EQ(r.probs[1], 0.5);
  EXPECT_EQ(r.probs[2], 0.0);
}

TEST(SparsemaxTest, AgreesWithOracleOnRandomVectors) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> dim(1, 12);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const double scale = std::pow(10.0, trial % 4 - 1);
    Vec z(static_cast<std::size_t>(dim(gen)));
    for (double& v : z) v = scale * normal(gen);
    const SparsemaxResult r = sparsemax(z);
    const oracle::Projection o = oracle::project_simplex_exhaustive(z);
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      EXPECT_NEAR(r.probs[i], o.probs[i], 1e-9);
      EXPECT_GE(r.probs[i], 0.0);
      sum += r.probs[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_NEAR(r.spmax_value, oracle::spmax_literal(z), 1e-9 * std::max(1.0, scale * scale));
  }
}

TEST(SparsemaxTest, ShiftInvariance) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Vec z(6), shifted(6);
    const double c = 10.0 * normal(gen);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = normal(gen), shifted[i] = z[i] + c;
    const SparsemaxResult a = sparsemax(z), b = sparsemax(shifted);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(a.probs[i], b.probs[i], 1e-12);
    EXPECT_NEAR(b.spmax_value, a.spmax_value + c, 1e-11);
  }
}

TEST(SpmaxTest, ScalarIsIdentity) {
  for (double x : {-1e6, -2.5, 0.0, 3.0, 1e6}) EXPECT_EQ(spmax(Vec{x}), x);
}

TEST(SpmaxTest, UniformAttainsUpperBound) {
  EXPECT_NEAR(spmax(Vec(4, 0.0)), 0.375, 1e-15);
}

TEST(SpmaxTest, PartialSupportValue) {
  const Vec z{0.6, 0.4, 0.0};
  EXPECT_NEAR(spmax(z), 0.76, 1e-15);
  EXPECT_NEAR(oracle::spmax_literal(z), 0.76, 1e-15);
  EXPECT_NEAR(oracle::spmax_variational(z), 0.76, 1e-15);
}

TEST(SpmaxTest, LiteralAndVariationalFormsAgree) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    Vec z(1 + trial % 9);
    for (double& v : z) v = normal(gen);
    EXPECT_NEAR(spmax(z), oracle::spmax_literal(z), 1e-10);
    EXPECT_NEAR(spmax(z), oracle::spmax_variational(z), 1e-10);
  }
}

TEST(ScaledSpmaxTest, Examples) {
  EXPECT_NEAR(scaled_spmax(Vec{2.0, 0.0}, 1.0), 2.0, 1e-15);
  EXPECT_NEAR(scaled_spmax(Vec{2.0, 0.0}, 4.0), 2.25, 1e-15);
  EXPECT_NEAR(4.0 * oracle::spmax_literal(Vec{0.5, 0.0}), 2.25, 1e-15);
  for (double alpha : {0.01, 1.0, 100.0}) EXPECT_NEAR(scaled_spmax(Vec{5.0}, alpha), 5.0, 1e-12);
}

TEST(ScaledSpmaxTest, RejectsNonPositiveAlpha) {
  EXPECT_THROW(scaled_spmax(Vec{1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(scaled_spmax(Vec{1.0}, -1.0), std::invalid_argument);
  EXPECT_THROW(softmax_distribution(Vec{1.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(log_sum_exp(Vec{1.0}, 0.0), std::invalid_argument);
}

TEST(ScaledSpmaxTest, BoundedBetweenMaxAndLogSumExp) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> normal(0.0, 3.0);
  std::uniform_real_distribution<double> log_alpha(-2.0, 2.0);
  for (int trial = 0; trial < 2000; ++trial) {
    Vec z(1 + trial % 15);
    for (double& v : z) v = normal(gen);
    const double alpha = std::pow(10.0, log_alpha(gen));
    const double mx = *std::max_element(z.begin(), z.end());
    const double d = static_cast<double>(z.size());
    const double sp = scaled_spmax(z, alpha);
    EXPECT_GE(sp, mx - 1e-12 * std::max(1.0, std::abs(mx)));
    EXPECT_LE(sp, mx + alpha * (d - 1.0) / (2.0 * d) + 1e-12 * std::max(1.0, std::abs(mx)));
    EXPECT_LE(sp, log_sum_exp(z, alpha) + 1e-12 * std::max(1.0, std::abs(mx)));
  }
}

TEST(SoftmaxTest, Examples) {
  const Vec even = softmax_distribution(Vec{3.0, 3.0}, 0.7);
  EXPECT_DOUBLE_EQ(even[0], 0.5);
  EXPECT_DOUBLE_EQ(even[1], 0.5);

  const Vec p = softmax_distribution(Vec{1.0, 0.0}, 1.0);
  const double e = std::exp(1.0);
  EXPECT_NEAR(p[0], e / (1.0 + e), 1e-15);
  EXPECT_NEAR(p[1], 1.0 / (1.0 + e), 1e-15);

  const Vec big = softmax_distribution(Vec{1000.0, 0.0}, 1.0);
  EXPECT_TRUE(std::isfinite(big[0]) && std::isfinite(big[1]));
  EXPECT_DOUBLE_EQ(big[0], 1.0);
  EXPECT_LT(big[1], 1e-300);
}

TEST(LogSumExpTest, Examples) {
  EXPECT_NEAR(log_sum_exp(Vec{0.0, 0.0}, 1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(log_sum_exp(Vec{5.0}, 0.3), 5.0, 1e-15);
  EXPECT_NEAR(log_sum_exp(Vec{1.0, 0.0}, 1.0), std::log(std::exp(1.0) + 1.0), 1e-15);
  EXPECT_NEAR(log_sum_exp(Vec{1000.0, 1000.0}, 1.0), 1000.0 + std::log(2.0), 1e-12);
}

}  // namespace
}  // namespace sparsemdp
