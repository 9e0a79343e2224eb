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

#include "sparsemdp/harness.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "format_util.h"

namespace sparsemdp {
namespace {

constexpr double kPositiveMass = 1e-12;

struct MethodOutcome {
  double expected_return;
  double support_ratio;
  bool converged;
};

MethodOutcome run_method(const TabularMdp& mdp, Method method, double alpha,
                         const SweepOptions& options) {
  SolverConfig config;
  config.method = method;
  config.alpha = alpha;
  config.tolerance = options.tolerance;
  config.max_iterations = options.max_iterations;
  const SolveReport report = solve(mdp, config);
  const PolicyEvaluation eval = evaluate_policy(mdp, report.policy, Regularizer::none());
  return {eval.expected_return, support_ratio(report.policy), report.converged};
}

double bound_for(Method method, double alpha, double gamma, std::size_t n_actions) {
  switch (method) {
    case Method::kMax:
      return 0.0;
    case Method::kSoft:
      return soft_gap_bound(alpha, gamma, n_actions);
    case Method::kSparse:
      return sparse_gap_bound(alpha, gamma, n_actions);
  }
  return 0.0;
}

ExperimentRecord make_record(Method method, double alpha, const TabularMdp& mdp,
                             const MethodOutcome& outcome, const MethodOutcome& baseline,
                             std::uint64_t seed) {
  ExperimentRecord rec;
  rec.method = method;
  rec.alpha = alpha;
  rec.n_actions = mdp.n_actions();
  rec.expected_return = outcome.expected_return;
  rec.gap = std::abs(baseline.expected_return - outcome.expected_return);
  rec.bound = bound_for(method, alpha, mdp.gamma(), mdp.n_actions());
  rec.support_ratio = outcome.support_ratio;
  rec.seed = seed;
  rec.converged = outcome.converged && baseline.converged;
  return rec;
}

void sort_records(std::vector<ExperimentRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ExperimentRecord& x, const ExperimentRecord& y) {
                     return std::tie(x.method, x.n_actions, x.alpha) <
                            std::tie(y.method, y.n_actions, y.alpha);
                   });
}

}  // namespace

double sparse_gap_bound(double alpha, double gamma, std::size_t n_actions) {
  const double a = static_cast<double>(n_actions);
  return alpha / (1.0 - gamma) * (a - 1.0) / (2.0 * a);
}

double soft_gap_bound(double alpha, double gamma, std::size_t n_actions) {
  return alpha * std::log(static_cast<double>(n_actions)) / (1.0 - gamma);
}

double support_ratio(const StochasticPolicy& policy) {
  const Matrix& p = policy.probs();
  const double positive = static_cast<double>((p.array() > kPositiveMass).count());
  return positive / static_cast<double>(p.size());
}

std::vector<ExperimentRecord> run_gap_sweep(const EnvironmentBuilder& builder,
                                            std::span<const std::size_t> levels,
                                            double alpha, double gamma,
                                            std::uint64_t seed,
                                            const SweepOptions& options) {
  std::vector<ExperimentRecord> records;
  for (std::size_t level : levels) {
    const TabularMdp mdp = builder(level, gamma, seed);
    const MethodOutcome baseline = run_method(mdp, Method::kMax, alpha, options);
    records.push_back(make_record(Method::kMax, alpha, mdp, baseline, baseline, seed));
    for (Method method : {Method::kSoft, Method::kSparse}) {
      const MethodOutcome outcome = run_method(mdp, method, alpha, options);
      records.push_back(make_record(method, alpha, mdp, outcome, baseline, seed));
    }
  }
  sort_records(records);
  return records;
}

std::vector<ExperimentRecord> run_support_sweep(const TabularMdp& mdp,
                                                std::span<const double> alphas,
                                                std::uint64_t seed,
                                                const SweepOptions& options) {
  std::vector<ExperimentRecord> records;
  const MethodOutcome baseline = run_method(mdp, Method::kMax, 1.0, options);
  for (double alpha : alphas) {
    for (Method method : {Method::kSoft, Method::kSparse}) {
      const MethodOutcome outcome = run_method(mdp, method, alpha, options);
      records.push_back(make_record(method, alpha, mdp, outcome, baseline, seed));
    }
  }
  sort_records(records);
  return records;
}

void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records,
                       bool header) {
  using internal::format_real;
  if (header) {
    out << "method,alpha,n_actions,expected_return,gap,bound,support_ratio,seed,"
           "converged\n";
  }
  for (const ExperimentRecord& r : records) {
    out << method_name(r.method) << ',' << format_real(r.alpha) << ',' << r.n_actions
        << ',' << format_real(r.expected_return) << ',' << format_real(r.gap) << ','
        << format_real(r.bound) << ',' << format_real(r.support_ratio) << ',' << r.seed
        << ',' << (r.converged ? "true" : "false") << '\n';
  }
}

void append_records_csv(const std::filesystem::path& path,
                        std::span<const ExperimentRecord> records) {
  std::error_code ec;
  const bool fresh = !std::filesystem::exists(path, ec) ||
                     std::filesystem::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_records_csv(out, records, fresh);
}

}  // namespace sparsemdp
