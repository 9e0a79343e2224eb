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

#include "sparsemdp/solvers.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "sparsemdp/environments.h"
#include "test_util.h"

namespace sparsemdp {
namespace {

using testing::self_loop_mdp;

SolverConfig config_for(Method method, double alpha = 1.0) {
  SolverConfig c;
  c.method = method;
  c.alpha = alpha;
  return c;
}

constexpr Method kAllMethods[] = {Method::kMax, Method::kSoft, Method::kSparse};

TEST(MethodTest, NamesRoundTrip) {
  for (Method m : kAllMethods) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_FALSE(parse_method("greedy").has_value());
}

TEST(SolverConfigTest, Validation) {
  EXPECT_NO_THROW(config_for(Method::kMax, 0.0).validate());
  try {
    config_for(Method::kSparse, 0.0).validate();
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "alpha must be positive");
  }
  SolverConfig c;
  c.tolerance = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(BellmanBackupTest, SingleActionIsPlainBackup) {
  const TabularMdp mdp = self_loop_mdp({1.0}, 0.9);
  for (Method m : kAllMethods) {
    EXPECT_NEAR(bellman_backup(mdp, Vector::Zero(1), config_for(m, 0.3))(0), 1.0, 1e-15);
  }
}

TEST(BellmanBackupTest, TwoActionExamples) {
  const TabularMdp mdp = self_loop_mdp({2.0, 0.0}, 0.0);
  EXPECT_NEAR(bellman_backup(mdp, Vector::Zero(1), config_for(Method::kSparse, 4.0))(0), 2.25,
              1e-15);
  EXPECT_EQ(bellman_backup(mdp, Vector::Zero(1), config_for(Method::kMax))(0), 2.0);
  EXPECT_NEAR(bellman_backup(mdp, Vector::Zero(1), config_for(Method::kSoft, 1.0))(0),
              std::log(std::exp(2.0) + 1.0), 1e-14);
}

TEST(BellmanBackupTest, RejectsBadInput) {
  const TabularMdp mdp = self_loop_mdp({2.0, 0.0}, 0.5);
  EXPECT_THROW(bellman_backup(mdp, Vector::Zero(1), config_for(Method::kSoft, -1.0)),
               std::invalid_argument);
  EXPECT_THROW(bellman_backup(mdp, Vector::Zero(2), config_for(Method::kMax)),
               std::invalid_argument);
}

TEST(SolveTest, GeometricSeries) {
  const SolveReport r = solve(self_loop_mdp({1.0}, 0.9), config_for(Method::kMax));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value(0), 10.0, 1e-9);
}

TEST(SolveTest, SparseBanditClosedForm) {
  const SolveReport r = solve(self_loop_mdp({2.0, 0.0}, 0.0), config_for(Method::kSparse, 4.0));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value(0), 2.25, 1e-15);
  EXPECT_NEAR(r.policy(0, 0), 0.75, 1e-15);
  EXPECT_NEAR(r.policy(0, 1), 0.25, 1e-15);
  const oracle::Projection o = oracle::project_simplex_exhaustive({0.5, 0.0});
  EXPECT_NEAR(o.probs[0], 0.75, 1e-15);
  EXPECT_NEAR(o.tau, -0.25, 1e-15);
}

TEST(SolveTest, MaxMatchesPolicyIteration) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TabularMdp mdp = build_random_mdp(8, 4, seed);
    const SolveReport r = solve(mdp, config_for(Method::kMax));
    ASSERT_TRUE(r.converged);
    const Eigen::VectorXd v = oracle::optimal_value_policy_iteration(mdp);
    EXPECT_LE((r.value - v).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(SolveTest, PolicyFollowsClosedForm) {
  const TabularMdp mdp = build_random_mdp(10, 6, 4);
  const double alpha = 0.3;
  const SolveReport r = solve(mdp, config_for(Method::kSparse, alpha));
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    std::vector<double> z(mdp.n_actions());
    for (std::size_t a = 0; a < z.size(); ++a) {
      z[a] = r.q_value(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) / alpha;
    }
    const oracle::Projection o = oracle::project_simplex_exhaustive(z);
    for (std::size_t a = 0; a < z.size(); ++a) {
      EXPECT_NEAR(r.policy(s, a), std::max(z[a] - o.tau, 0.0), 1e-9);
    }
    EXPECT_NEAR(r.value(static_cast<Eigen::Index>(s)), alpha * oracle::spmax_literal(z), 1e-8);
  }
}

TEST(SolveTest, OptimalValueIsRegularizedReturnOfItsPolicy) {
  const TabularMdp mdp = build_random_mdp(9, 3, 21, 0.85);
  const double alpha = 0.8;
  const SolveReport sp = solve(mdp, config_for(Method::kSparse, alpha));
  EXPECT_LE((evaluate_policy(mdp, sp.policy, Regularizer::sparse(alpha)).value - sp.value)
                .cwiseAbs()
                .maxCoeff(),
            1e-8);
  const SolveReport soft = solve(mdp, config_for(Method::kSoft, alpha));
  EXPECT_LE((evaluate_policy(mdp, soft.policy, Regularizer::soft(alpha)).value - soft.value)
                .cwiseAbs()
                .maxCoeff(),
            1e-8);
}

TEST(SolveTest, ReportsNonConvergence) {
  SolverConfig c = config_for(Method::kSparse);
  c.max_iterations = 3;
  const SolveReport r = solve(build_random_mdp(5, 2, 1), c);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_EQ(r.residual_trace.size(), 3u);
}

TEST(SolveTest, TraceContractsByGamma) {
  const TabularMdp mdp = build_random_mdp(6, 3, 2, 0.7);
  for (Method m : kAllMethods) {
    const SolveReport r = solve(mdp, config_for(m, 0.5));
    for (std::size_t i = 1; i < r.residual_trace.size(); ++i) {
      EXPECT_LE(r.residual_trace[i], 0.7 * r.residual_trace[i - 1] + 1e-15);
    }
  }
}

TEST(BellmanResidualTest, ConvergedReportsAreSmall) {
  const TabularMdp mdp = build_random_mdp(12, 5, 8);
  for (Method m : {Method::kSparse, Method::kSoft}) {
    const SolverConfig c = config_for(m, 0.6);
    const SolveReport r = solve(mdp, c);
    ASSERT_TRUE(r.converged);
    EXPECT_LE(bellman_residual(mdp, r, c), 10.0 * c.tolerance);
  }
}

TEST(BellmanResidualTest, SoftReportSatisfiesSoftBellmanEquation) {
  // V(s) = alpha log sum_a exp(Q(s,a)/alpha), pi = exp((Q - V)/alpha), written out.
  const TabularMdp mdp = build_random_mdp(7, 4, 31);
  const double alpha = 0.9;
  const SolveReport r = solve(mdp, config_for(Method::kSoft, alpha));
  double worst = 0.0;
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    double acc = 0.0;
    std::vector<double> q(mdp.n_actions());
    for (std::size_t a = 0; a < q.size(); ++a) {
      q[a] = mdp.reward(s, a) + mdp.gamma() * mdp.expected_next(s, a, r.value);
      acc += std::exp(q[a] / alpha);
    }
    const double v = alpha * std::log(acc);
    worst = std::max(worst, std::abs(v - r.value(static_cast<Eigen::Index>(s))));
    for (std::size_t a = 0; a < q.size(); ++a) {
      worst = std::max(worst, std::abs(std::exp((q[a] - v) / alpha) - r.policy(s, a)));
    }
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(BellmanResidualTest, ZeroValueIsOneBackup) {
  const TabularMdp mdp = build_random_mdp(5, 3, 12);
  for (Method m : kAllMethods) {
    const SolverConfig c = config_for(m, 0.5);
    const Vector zero = Vector::Zero(5);
    const Matrix q = backed_up_q(mdp, zero);
    SolveReport report{zero, q, extract_policy(q, c), {}, 0, false};
    EXPECT_NEAR(bellman_residual(mdp, report, c),
                bellman_backup(mdp, zero, c).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(SupportingSetTest, Examples) {
  const std::vector<double> q = {2.0, 0.0};
  EXPECT_EQ(supporting_set(q, 1.0), (std::vector<std::size_t>{0}));
  EXPECT_EQ(supporting_set(q, 4.0), (std::vector<std::size_t>{0, 1}));
  const std::vector<double> flat(6, 1.5);
  for (double alpha : {1e-3, 1.0, 1e3}) EXPECT_EQ(supporting_set(flat, alpha).size(), 6u);
  EXPECT_THROW(supporting_set(q, 0.0), std::invalid_argument);
  EXPECT_THROW(supporting_set(std::vector<double>{}, 1.0), std::invalid_argument);
}

TEST(SupportingSetTest, MatchesOracleSupport) {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> q(1 + trial % 10), z(q.size());
    const double alpha = 0.05 + 0.01 * trial;
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = normal(gen), z[i] = q[i] / alpha;
    const oracle::Projection o = oracle::project_simplex_exhaustive(z);
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (o.probs[i] > 0.0) expected.push_back(i);
    }
    EXPECT_EQ(supporting_set(q, alpha), expected);
  }
}

TEST(SupportingSetTest, GrowsWithAlpha) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> q(20);
  for (double& v : q) v = normal(gen);
  std::size_t previous = 0;
  for (double alpha = 1e-3; alpha < 1e3; alpha *= 1.5) {
    const std::size_t size = supporting_set(q, alpha).size();
    EXPECT_GE(size, previous);
    previous = size;
  }
  EXPECT_EQ(supporting_set(q, 1e-6).size(), 1u);
  EXPECT_EQ(previous, 20u);
}

TEST(OperatorPropertiesTest, MonotoneShiftAndContraction) {
  std::mt19937_64 gen(13);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const TabularMdp mdp = build_random_mdp(6, 4, seed, 0.8);
    for (Method m : kAllMethods) {
      const SolverConfig c = config_for(m, 0.7);
      const Vector x = testing::random_vector(6, 5.0, gen);
      const Vector y = x + testing::random_vector(6, 1.0, gen).cwiseAbs();
      const Vector ux = bellman_backup(mdp, x, c), uy = bellman_backup(mdp, y, c);
      EXPECT_TRUE(((uy - ux).array() >= -1e-12).all());
      const double shift = 3.7;
      const Vector shifted = bellman_backup(mdp, (x.array() + shift).matrix(), c);
      EXPECT_LE((shifted.array() - ux.array() - 0.8 * shift).abs().maxCoeff(), 1e-9);
      const Vector z = testing::random_vector(6, 5.0, gen);
      const Vector uz = bellman_backup(mdp, z, c);
      EXPECT_LE((ux - uz).cwiseAbs().maxCoeff(),
                0.8 * (x - z).cwiseAbs().maxCoeff() + 1e-12);
    }
  }
}

TEST(OperatorPropertiesTest, OptimalValuesAreOrdered) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TabularMdp mdp = build_random_mdp(8, 5, seed);
    const Vector v_max = solve(mdp, config_for(Method::kMax)).value;
    const Vector v_sp = solve(mdp, config_for(Method::kSparse, 0.5)).value;
    const Vector v_soft = solve(mdp, config_for(Method::kSoft, 0.5)).value;
    EXPECT_GE((v_sp - v_max).minCoeff(), -1e-9);
    EXPECT_GE((v_soft - v_sp).minCoeff(), -1e-9);
  }
}

}  // namespace
}  // namespace sparsemdp
