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

#ifndef SPARSEMDP_SOLVERS_H_
#define SPARSEMDP_SOLVERS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sparsemdp/mdp.h"

namespace sparsemdp {

// Which max-approximation the Bellman backup applies over actions:
//   kMax     max_a q
//   kSoft    alpha * log sum exp(q / alpha)
//   kSparse  alpha * spmax(q / alpha)
enum class Method { kMax, kSoft, kSparse };

std::string_view method_name(Method method);
// Accepts "max", "soft", "sparse".
std::optional<Method> parse_method(std::string_view name);

struct SolverConfig {
  Method method = Method::kSparse;
  // Unused by kMax.
  double alpha = 1.0;
  // Target sup-norm distance to the fixed point. Iteration stops once the
  // delta between successive iterates is at most
  // tolerance * min(1, (1 - gamma) / gamma).
  double tolerance = 1e-10;
  long max_iterations = 100000;

  // Throws std::invalid_argument.
  void validate() const;
};

struct SolveReport {
  Vector value;
  Matrix q_value;
  StochasticPolicy policy;
  // Sup-norm delta of each iteration.
  std::vector<double> residual_trace;
  long iterations = 0;
  bool converged = false;
};

// Backed-up action values r(s,a) + gamma sum_{s'} x(s') T(s'|s,a).
Matrix backed_up_q(const TabularMdp& mdp, const Vector& x);

// Max-approximation of one row of action values per the configured method.
double state_value(std::span<const double> q_row, const SolverConfig& config);

// One application of the configured Bellman operator to x.
Vector bellman_backup(const TabularMdp& mdp, const Vector& x,
                      const SolverConfig& config);

// Closed-form policy for one row of action values: uniform over the argmax
// set (within 1e-12) for kMax, softmax(q / alpha) for kSoft, and
// sparsemax(q / alpha) for kSparse.
std::vector<double> policy_row(std::span<const double> q_row,
                               const SolverConfig& config);
StochasticPolicy extract_policy(const Matrix& q_value, const SolverConfig& config);

// Value iteration from x0 = 0 (or `initial`). Non-convergence is reported
// through `converged`, not thrown.
SolveReport solve(const TabularMdp& mdp, const SolverConfig& config);
SolveReport solve(const TabularMdp& mdp, const SolverConfig& config,
                  const Vector& initial);

// Violation of the coupled optimality conditions at the report's value:
//   max_s |V(s) - U(V)(s)| + max_{s,a} |pi(a|s) - closed_form(Q_V)(s,a)|
// where Q_V = r + gamma T V.
double bellman_residual(const TabularMdp& mdp, const SolveReport& report,
                        const SolverConfig& config);

// Actions a_(i) (descending by value) with alpha + i q_(i) > sum_{j<=i} q_(j),
// returned in ascending index order.
std::vector<std::size_t> supporting_set(std::span<const double> q_row,
                                        double alpha);

}  // namespace sparsemdp

#endif  // SPARSEMDP_SOLVERS_H_
