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

// Performance-gap and supporting-set experiments over families of MDPs.

#ifndef SPARSEMDP_HARNESS_H_
#define SPARSEMDP_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

#include "sparsemdp/mdp.h"
#include "sparsemdp/solvers.h"

namespace sparsemdp {

struct ExperimentRecord {
  Method method = Method::kMax;
  double alpha = 0.0;
  std::size_t n_actions = 0;
  // Unregularized return E_pi[r] of the method's extracted policy.
  double expected_return = 0.0;
  // |J_max - J_method|.
  double gap = 0.0;
  // Worst-case gap: alpha/(1-gamma) (|A|-1)/(2|A|) for sparse,
  // alpha log|A| / (1-gamma) for soft, 0 for max.
  double bound = 0.0;
  // Mean over states of the fraction of actions with probability > 1e-12.
  double support_ratio = 0.0;
  std::uint64_t seed = 0;
  bool converged = false;
};

double sparse_gap_bound(double alpha, double gamma, std::size_t n_actions);
double soft_gap_bound(double alpha, double gamma, std::size_t n_actions);

// Mean over states of |{a : pi(a|s) > 1e-12}| / |A|.
double support_ratio(const StochasticPolicy& policy);

// Builds one MDP of the family for an action count.
using EnvironmentBuilder =
    std::function<TabularMdp(std::size_t n_actions, double gamma, std::uint64_t seed)>;

struct SweepOptions {
  double tolerance = 1e-10;
  long max_iterations = 100000;
};

// For each action level, solves the max, soft and sparse problems and
// evaluates each extracted policy without the regularizer. Records are
// sorted by (method, n_actions, alpha).
std::vector<ExperimentRecord> run_gap_sweep(const EnvironmentBuilder& builder,
                                            std::span<const std::size_t> levels,
                                            double alpha, double gamma,
                                            std::uint64_t seed,
                                            const SweepOptions& options = {});

// For each alpha, solves the soft and sparse problems on one MDP and records
// the support ratio of the optimal policies (gap and bound filled in as in
// the gap sweep).
std::vector<ExperimentRecord> run_support_sweep(const TabularMdp& mdp,
                                                std::span<const double> alphas,
                                                std::uint64_t seed,
                                                const SweepOptions& options = {});

// method,alpha,n_actions,expected_return,gap,bound,support_ratio,seed,converged
void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records,
                       bool header = true);
// Appends to `path`, writing the header only when the file is new or empty.
void append_records_csv(const std::filesystem::path& path,
                        std::span<const ExperimentRecord> records);

}  // namespace sparsemdp

#endif  // SPARSEMDP_HARNESS_H_
