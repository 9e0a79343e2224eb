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

#include "sparsemdp/mdp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/LU>
#include <Eigen/SparseCore>

namespace sparsemdp {
namespace {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr double kFixedPointTolerance = 1e-10;
constexpr long kMaxFixedPointSweeps = 1000000;
constexpr double kResidualLimit = 1e-8;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void check_dimensions(const TabularMdp& mdp, const StochasticPolicy& policy) {
  require(policy.n_states() == mdp.n_states() &&
              policy.n_actions() == mdp.n_actions(),
          "policy shape " + std::to_string(policy.n_states()) + "x" +
              std::to_string(policy.n_actions()) + " does not match MDP " +
              std::to_string(mdp.n_states()) + "x" +
              std::to_string(mdp.n_actions()));
}

// T_pi(s'|s) = sum_a T(s'|s,a) pi(a|s).
SparseRows policy_transition(const TabularMdp& mdp,
                             const StochasticPolicy& policy) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
      const double pa = policy(s, a);
      if (pa == 0.0) continue;
      for (const Successor& next : mdp.successors(s, a)) {
        triplets.emplace_back(static_cast<Eigen::Index>(s),
                              static_cast<Eigen::Index>(next.state),
                              pa * next.prob);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(mdp.n_states());
  SparseRows t(n, n);
  t.setFromTriplets(triplets.begin(), triplets.end());
  return t;
}

double neg_log_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

// x = b + gamma * m x, iterated to a fixed point.
Vector fixed_point(const SparseRows& m, const Vector& b, double gamma) {
  Vector x = Vector::Zero(b.size());
  for (long sweep = 0; sweep < kMaxFixedPointSweeps; ++sweep) {
    Vector next = b + gamma * (m * x);
    const double delta = (next - x).lpNorm<Eigen::Infinity>();
    x.swap(next);
    if (delta <= kFixedPointTolerance) return x;
  }
  throw std::runtime_error("policy evaluation: fixed-point sweeps did not converge");
}

// Solves (I - gamma T_pi) v = b, or its transpose when `transpose` is set.
Vector solve_discounted(const SparseRows& t_pi, const Vector& b, double gamma,
                        bool transpose) {
  const Eigen::Index n = t_pi.rows();
  Vector x;
  if (static_cast<std::size_t>(n) <= kDenseSolveLimit) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n) - gamma * Eigen::MatrixXd(t_pi);
    if (transpose) g.transposeInPlace();
    x = g.partialPivLu().solve(b);
    const double residual = (g * x - b).lpNorm<Eigen::Infinity>();
    if (!(residual <= kResidualLimit)) {
      throw std::runtime_error("policy evaluation: linear solve residual " +
                               std::to_string(residual));
    }
  } else if (transpose) {
    const SparseRows t_transposed = t_pi.transpose();
    x = fixed_point(t_transposed, b, gamma);
  } else {
    x = fixed_point(t_pi, b, gamma);
  }
  return x;
}

}  // namespace

TabularMdp::TabularMdp(std::size_t n_states, std::size_t n_actions,
                       std::span<const TransitionEntry> transitions,
                       Matrix reward, double gamma, Vector initial_dist,
                       double row_tolerance)
    : n_states_(n_states),
      n_actions_(n_actions),
      reward_(std::move(reward)),
      gamma_(gamma),
      initial_dist_(std::move(initial_dist)) {
  require(n_states >= 1, "n_states must be at least 1");
  require(n_actions >= 1, "n_actions must be at least 1");
  require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
  require(static_cast<std::size_t>(reward_.rows()) == n_states &&
              static_cast<std::size_t>(reward_.cols()) == n_actions,
          "reward must be n_states x n_actions");
  require(reward_.allFinite(), "reward contains a non-finite value");
  require(static_cast<std::size_t>(initial_dist_.size()) == n_states,
          "initial_dist must have n_states entries");
  require((initial_dist_.array() >= 0.0).all() && initial_dist_.allFinite(),
          "initial_dist entries must be finite and non-negative");
  require(std::abs(initial_dist_.sum() - 1.0) <= row_tolerance,
          "initial_dist must sum to 1");

  const std::size_t rows = n_states * n_actions;
  std::vector<std::size_t> counts(rows + 1, 0);
  for (const TransitionEntry& e : transitions) {
    require(e.state < n_states && e.action < n_actions && e.next_state < n_states,
            "transition (" + std::to_string(e.state) + ", " +
                std::to_string(e.action) + ", " + std::to_string(e.next_state) +
                ") is out of range");
    require(std::isfinite(e.prob) && e.prob >= 0.0,
            "transition probabilities must be finite and non-negative");
    ++counts[e.state * n_actions + e.action + 1];
  }
  std::vector<std::size_t> start(rows + 1, 0);
  for (std::size_t r = 0; r < rows; ++r) start[r + 1] = start[r] + counts[r + 1];
  std::vector<Successor> bucketed(transitions.size());
  std::vector<std::size_t> fill(start.begin(), start.end() - 1);
  for (const TransitionEntry& e : transitions) {
    bucketed[fill[e.state * n_actions + e.action]++] = {e.next_state, e.prob};
  }

  offsets_.assign(rows + 1, 0);
  entries_.reserve(transitions.size());
  for (std::size_t r = 0; r < rows; ++r) {
    auto first = bucketed.begin() + static_cast<std::ptrdiff_t>(start[r]);
    auto last = bucketed.begin() + static_cast<std::ptrdiff_t>(start[r + 1]);
    std::sort(first, last, [](const Successor& x, const Successor& y) {
      return x.state < y.state;
    });
    double total = 0.0;
    for (auto it = first; it != last; ++it) {
      total += it->prob;
      if (it->prob == 0.0) continue;
      if (entries_.size() > offsets_[r] && entries_.back().state == it->state) {
        entries_.back().prob += it->prob;
      } else {
        entries_.push_back(*it);
      }
    }
    require(std::abs(total - 1.0) <= row_tolerance,
            "transition row (s=" + std::to_string(r / n_actions) +
                ", a=" + std::to_string(r % n_actions) + ") sums to " +
                std::to_string(total));
    offsets_[r + 1] = entries_.size();
  }
}

double TabularMdp::expected_next(std::size_t s, std::size_t a,
                                 const Vector& x) const {
  double total = 0.0;
  for (const Successor& next : successors(s, a)) {
    total += next.prob * x[static_cast<Eigen::Index>(next.state)];
  }
  return total;
}

std::vector<TransitionEntry> TabularMdp::transition_entries() const {
  std::vector<TransitionEntry> out;
  out.reserve(entries_.size());
  for (std::size_t s = 0; s < n_states_; ++s) {
    for (std::size_t a = 0; a < n_actions_; ++a) {
      for (const Successor& next : successors(s, a)) {
        out.push_back({s, a, next.state, next.prob});
      }
    }
  }
  return out;
}

bool TabularMdp::operator==(const TabularMdp& other) const {
  if (n_states_ != other.n_states_ || n_actions_ != other.n_actions_ ||
      gamma_ != other.gamma_ || reward_ != other.reward_ ||
      initial_dist_ != other.initial_dist_ || offsets_ != other.offsets_ ||
      entries_.size() != other.entries_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].state != other.entries_[i].state ||
        entries_[i].prob != other.entries_[i].prob) {
      return false;
    }
  }
  return true;
}

StochasticPolicy::StochasticPolicy(Matrix probs) : probs_(std::move(probs)) {
  require(probs_.rows() >= 1 && probs_.cols() >= 1, "policy must be non-empty");
  require(probs_.allFinite() && (probs_.array() >= 0.0).all(),
          "policy entries must be finite and non-negative");
  for (Eigen::Index s = 0; s < probs_.rows(); ++s) {
    require(std::abs(probs_.row(s).sum() - 1.0) <= 1e-9,
            "policy row " + std::to_string(s) + " does not sum to 1");
  }
}

StochasticPolicy StochasticPolicy::uniform(std::size_t n_states,
                                           std::size_t n_actions) {
  return StochasticPolicy(Matrix::Constant(static_cast<Eigen::Index>(n_states),
                                           static_cast<Eigen::Index>(n_actions),
                                           1.0 / static_cast<double>(n_actions)));
}

StochasticPolicy StochasticPolicy::deterministic(
    std::span<const std::size_t> actions, std::size_t n_actions) {
  Matrix probs = Matrix::Zero(static_cast<Eigen::Index>(actions.size()),
                              static_cast<Eigen::Index>(n_actions));
  for (std::size_t s = 0; s < actions.size(); ++s) {
    require(actions[s] < n_actions, "action index out of range");
    probs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(actions[s])) = 1.0;
  }
  return StochasticPolicy(std::move(probs));
}

Vector expected_state_reward(const TabularMdp& mdp,
                             const StochasticPolicy& policy,
                             Regularizer regularizer) {
  check_dimensions(mdp, policy);
  require(std::isfinite(regularizer.alpha) && regularizer.alpha >= 0.0,
          "regularizer alpha must be finite and non-negative");
  Vector r_pi(static_cast<Eigen::Index>(mdp.n_states()));
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    double total = 0.0;
    for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
      const double p = policy(s, a);
      total += p * mdp.reward(s, a);
      switch (regularizer.kind) {
        case Regularizer::Kind::kNone:
          break;
        case Regularizer::Kind::kSparse:
          total += regularizer.alpha * 0.5 * (1.0 - p) * p;
          break;
        case Regularizer::Kind::kSoft:
          total += regularizer.alpha * neg_log_term(p);
          break;
      }
    }
    r_pi[static_cast<Eigen::Index>(s)] = total;
  }
  return r_pi;
}

PolicyEvaluation evaluate_policy(const TabularMdp& mdp,
                                 const StochasticPolicy& policy,
                                 Regularizer regularizer) {
  const Vector r_pi = expected_state_reward(mdp, policy, regularizer);
  const SparseRows t_pi = policy_transition(mdp, policy);

  PolicyEvaluation out;
  out.value = solve_discounted(t_pi, r_pi, mdp.gamma(), /*transpose=*/false);
  out.visitation =
      solve_discounted(t_pi, mdp.initial_dist(), mdp.gamma(), /*transpose=*/true);
  out.q_value = mdp.reward();
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
      out.q_value(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) +=
          mdp.gamma() * mdp.expected_next(s, a, out.value);
    }
  }
  out.expected_return = mdp.initial_dist().dot(out.value);
  return out;
}

Vector visitation(const TabularMdp& mdp, const StochasticPolicy& policy) {
  check_dimensions(mdp, policy);
  return solve_discounted(policy_transition(mdp, policy), mdp.initial_dist(),
                          mdp.gamma(), /*transpose=*/true);
}

double tsallis_regularizer(const TabularMdp& mdp, const StochasticPolicy& policy) {
  const Vector rho = visitation(mdp, policy);
  double total = 0.0;
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    double per_state = 0.0;
    for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
      const double p = policy(s, a);
      per_state += 0.5 * (1.0 - p) * p;
    }
    total += rho[static_cast<Eigen::Index>(s)] * per_state;
  }
  return total;
}

double causal_entropy(const TabularMdp& mdp, const StochasticPolicy& policy) {
  const Vector rho = visitation(mdp, policy);
  double total = 0.0;
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    double per_state = 0.0;
    for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
      per_state += neg_log_term(policy(s, a));
    }
    total += rho[static_cast<Eigen::Index>(s)] * per_state;
  }
  return total;
}

double tsallis_entropy(std::span<const double> p, double q, double k) {
  if (q == 1.0) {
    double h = 0.0;
    for (double v : p) h += neg_log_term(v);
    return k * h;
  }
  double power_sum = 0.0;
  for (double v : p) power_sum += std::pow(v, q);
  return k / (q - 1.0) * (1.0 - power_sum);
}

}  // namespace sparsemdp
