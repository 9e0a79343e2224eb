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

#ifndef SPARSEMDP_MDP_H_
#define SPARSEMDP_MDP_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sparsemdp {

using Vector = Eigen::VectorXd;
// Row-major so that the action row of a state is contiguous.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Contiguous view of one row of a row-major matrix.
inline std::span<const double> row_span(const Matrix& m, std::size_t row) {
  return {m.data() + row * static_cast<std::size_t>(m.cols()),
          static_cast<std::size_t>(m.cols())};
}

// One (s, a, s', p) record, the unit of the MDP file format.
struct TransitionEntry {
  std::size_t state;
  std::size_t action;
  std::size_t next_state;
  double prob;
};

struct Successor {
  std::size_t state;
  double prob;
};

// Finite discounted MDP. Transitions are stored sparsely per (s, a) so that
// point-mass dynamics over large action grids stay small. Immutable after
// construction.
class TabularMdp {
 public:
  // Duplicate (s, a, s') records are summed; zero-probability records are
  // dropped. Rows are validated against `row_tolerance` and never
  // renormalized. Throws std::invalid_argument on any violated invariant.
  TabularMdp(std::size_t n_states, std::size_t n_actions,
             std::span<const TransitionEntry> transitions, Matrix reward,
             double gamma, Vector initial_dist, double row_tolerance = 1e-9);

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }
  double gamma() const { return gamma_; }
  const Matrix& reward() const { return reward_; }
  double reward(std::size_t s, std::size_t a) const { return reward_(s, a); }
  const Vector& initial_dist() const { return initial_dist_; }

  std::span<const Successor> successors(std::size_t s, std::size_t a) const {
    const std::size_t row = s * n_actions_ + a;
    return std::span<const Successor>(entries_)
        .subspan(offsets_[row], offsets_[row + 1] - offsets_[row]);
  }

  // sum_{s'} T(s'|s,a) x(s')
  double expected_next(std::size_t s, std::size_t a, const Vector& x) const;

  // All stored records in (s, a, s') order.
  std::vector<TransitionEntry> transition_entries() const;

  bool operator==(const TabularMdp& other) const;

 private:
  std::size_t n_states_;
  std::size_t n_actions_;
  std::vector<std::size_t> offsets_;
  std::vector<Successor> entries_;
  Matrix reward_;
  double gamma_;
  Vector initial_dist_;
};

// pi(a|s) stored as an |S| x |A| row-stochastic matrix.
class StochasticPolicy {
 public:
  explicit StochasticPolicy(Matrix probs);

  static StochasticPolicy uniform(std::size_t n_states, std::size_t n_actions);
  static StochasticPolicy deterministic(std::span<const std::size_t> actions,
                                        std::size_t n_actions);

  const Matrix& probs() const { return probs_; }
  double operator()(std::size_t s, std::size_t a) const { return probs_(s, a); }
  std::size_t n_states() const { return static_cast<std::size_t>(probs_.rows()); }
  std::size_t n_actions() const { return static_cast<std::size_t>(probs_.cols()); }

 private:
  Matrix probs_;
};

struct Regularizer {
  enum class Kind { kNone, kSparse, kSoft };
  Kind kind = Kind::kNone;
  double alpha = 0.0;

  static Regularizer none() { return {}; }
  static Regularizer sparse(double alpha) { return {Kind::kSparse, alpha}; }
  static Regularizer soft(double alpha) { return {Kind::kSoft, alpha}; }
};

struct PolicyEvaluation {
  Vector value;
  Matrix q_value;
  // Discounted state visitation; sums to 1 / (1 - gamma).
  Vector visitation;
  double expected_return = 0.0;
};

// Solves (I - gamma T_pi) V = r_pi, where r_pi carries the regularizer's
// per-step bonus: (alpha/2)(1 - pi) for sparse, -alpha log pi for soft.
// Q(s,a) = r(s,a) + gamma sum T V. Dense LU up to kDenseSolveLimit states,
// fixed-point sweeps above.
PolicyEvaluation evaluate_policy(const TabularMdp& mdp,
                                 const StochasticPolicy& policy,
                                 Regularizer regularizer = Regularizer::none());

// rho^T = d^T (I - gamma T_pi)^{-1}.
Vector visitation(const TabularMdp& mdp, const StochasticPolicy& policy);

// Expected per-step reward of the policy under the regularizer, r_pi(s).
Vector expected_state_reward(const TabularMdp& mdp,
                             const StochasticPolicy& policy,
                             Regularizer regularizer);

// W(pi) = E_pi[1/2 (1 - pi(a|s))], the causal sparse Tsallis entropy.
double tsallis_regularizer(const TabularMdp& mdp, const StochasticPolicy& policy);

// H(pi) = E_pi[-log pi(a|s)], with 0 log 0 = 0.
double causal_entropy(const TabularMdp& mdp, const StochasticPolicy& policy);

// S_{q,k}(p) = k / (q - 1) (1 - sum p_i^q); q = 1 is the Shannon limit
// -k sum p log p.
double tsallis_entropy(std::span<const double> p, double q, double k);

inline constexpr std::size_t kDenseSolveLimit = 2000;

}  // namespace sparsemdp

#endif  // SPARSEMDP_MDP_H_
