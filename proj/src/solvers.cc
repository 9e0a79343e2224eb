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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sparsemdp/sparsemax.h"

namespace sparsemdp {
namespace {

constexpr double kArgmaxTieTolerance = 1e-12;

void fill_backed_up_q(const TabularMdp& mdp, const Vector& x, Matrix& q) {
  const double gamma = mdp.gamma();
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
      q(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) =
          mdp.reward(s, a) + gamma * mdp.expected_next(s, a, x);
    }
  }
}

void check_state_vector(const TabularMdp& mdp, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != mdp.n_states()) {
    throw std::invalid_argument("state vector has " + std::to_string(x.size()) +
                                " entries, MDP has " +
                                std::to_string(mdp.n_states()) + " states");
  }
  if (!x.allFinite()) {
    throw std::invalid_argument("state vector contains a non-finite value");
  }
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kMax:
      return "max";
    case Method::kSoft:
      return "soft";
    case Method::kSparse:
      return "sparse";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "max") return Method::kMax;
  if (name == "soft") return Method::kSoft;
  if (name == "sparse") return Method::kSparse;
  return std::nullopt;
}

void SolverConfig::validate() const {
  if (method != Method::kMax && !(alpha > 0.0 && std::isfinite(alpha))) {
    throw std::invalid_argument("alpha must be positive");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("max_iterations must be positive");
  }
}

Matrix backed_up_q(const TabularMdp& mdp, const Vector& x) {
  check_state_vector(mdp, x);
  Matrix q(static_cast<Eigen::Index>(mdp.n_states()),
           static_cast<Eigen::Index>(mdp.n_actions()));
  fill_backed_up_q(mdp, x, q);
  return q;
}

double state_value(std::span<const double> q_row, const SolverConfig& config) {
  switch (config.method) {
    case Method::kMax:
      return *std::max_element(q_row.begin(), q_row.end());
    case Method::kSoft:
      return log_sum_exp(q_row, config.alpha);
    case Method::kSparse:
      return scaled_spmax(q_row, config.alpha);
  }
  throw std::invalid_argument("unknown method");
}

Vector bellman_backup(const TabularMdp& mdp, const Vector& x,
                      const SolverConfig& config) {
  config.validate();
  const Matrix q = backed_up_q(mdp, x);
  Vector out(q.rows());
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    out[static_cast<Eigen::Index>(s)] = state_value(row_span(q, s), config);
  }
  return out;
}

std::vector<double> policy_row(std::span<const double> q_row,
                               const SolverConfig& config) {
  switch (config.method) {
    case Method::kMax: {
      const double top = *std::max_element(q_row.begin(), q_row.end());
      std::vector<double> row(q_row.size(), 0.0);
      std::size_t ties = 0;
      for (std::size_t a = 0; a < q_row.size(); ++a) {
        if (top - q_row[a] <= kArgmaxTieTolerance) {
          row[a] = 1.0;
          ++ties;
        }
      }
      for (double& p : row) p /= static_cast<double>(ties);
      return row;
    }
    case Method::kSoft:
      return softmax_distribution(q_row, config.alpha);
    case Method::kSparse: {
      std::vector<double> scaled(q_row.begin(), q_row.end());
      for (double& v : scaled) v /= config.alpha;
      return sparsemax(scaled).probs;
    }
  }
  throw std::invalid_argument("unknown method");
}

StochasticPolicy extract_policy(const Matrix& q_value, const SolverConfig& config) {
  config.validate();
  Matrix probs(q_value.rows(), q_value.cols());
  for (Eigen::Index s = 0; s < q_value.rows(); ++s) {
    const std::vector<double> row =
        policy_row(row_span(q_value, static_cast<std::size_t>(s)), config);
    for (Eigen::Index a = 0; a < q_value.cols(); ++a) {
      probs(s, a) = row[static_cast<std::size_t>(a)];
    }
  }
  return StochasticPolicy(std::move(probs));
}

SolveReport solve(const TabularMdp& mdp, const SolverConfig& config) {
  return solve(mdp, config, Vector::Zero(static_cast<Eigen::Index>(mdp.n_states())));
}

SolveReport solve(const TabularMdp& mdp, const SolverConfig& config,
                  const Vector& initial) {
  config.validate();
  check_state_vector(mdp, initial);

  // delta <= tol * (1 - gamma) / gamma bounds the distance to the fixed point
  // by tol (contraction), so runs from different starts agree within 2 tol.
  // Capped at tol so the last recorded delta never exceeds it.
  const double gamma = mdp.gamma();
  const double stop_delta =
      gamma > 0.0 ? config.tolerance * std::min(1.0, (1.0 - gamma) / gamma) : config.tolerance;

  Vector x = initial;
  Vector next(x.size());
  Matrix q(static_cast<Eigen::Index>(mdp.n_states()),
           static_cast<Eigen::Index>(mdp.n_actions()));
  std::vector<double> trace;
  bool converged = false;
  long iterations = 0;
  while (iterations < config.max_iterations) {
    fill_backed_up_q(mdp, x, q);
    for (std::size_t s = 0; s < mdp.n_states(); ++s) {
      next[static_cast<Eigen::Index>(s)] = state_value(row_span(q, s), config);
    }
    const double delta = (next - x).lpNorm<Eigen::Infinity>();
    x.swap(next);
    ++iterations;
    trace.push_back(delta);
    if (delta <= stop_delta) {
      converged = true;
      break;
    }
  }

  fill_backed_up_q(mdp, x, q);
  StochasticPolicy policy = extract_policy(q, config);
  return SolveReport{std::move(x), std::move(q), std::move(policy),
                     std::move(trace), iterations, converged};
}

double bellman_residual(const TabularMdp& mdp, const SolveReport& report,
                        const SolverConfig& config) {
  config.validate();
  const Matrix q = backed_up_q(mdp, report.value);
  double value_gap = 0.0;
  double policy_gap = 0.0;
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    const std::span<const double> row = row_span(q, s);
    value_gap = std::max(value_gap, std::abs(report.value[static_cast<Eigen::Index>(s)] -
                                             state_value(row, config)));
    const std::vector<double> closed_form = policy_row(row, config);
    for (std::size_t a = 0; a < closed_form.size(); ++a) {
      policy_gap = std::max(policy_gap, std::abs(report.policy(s, a) - closed_form[a]));
    }
  }
  return value_gap + policy_gap;
}

std::vector<std::size_t> supporting_set(std::span<const double> q_row,
                                        double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive");
  }
  if (q_row.empty()) throw std::invalid_argument("action values are empty");
  for (double v : q_row) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("action values contain a non-finite value");
    }
  }
  std::vector<std::size_t> order(q_row.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return q_row[i] > q_row[j];
  });
  double cumsum = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const double v = q_row[order[i]];
    cumsum += v;
    if (alpha + static_cast<double>(i + 1) * v > cumsum) k = i + 1;
  }
  std::vector<std::size_t> support(order.begin(),
                                   order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(support.begin(), support.end());
  return support;
}

}  // namespace sparsemdp
