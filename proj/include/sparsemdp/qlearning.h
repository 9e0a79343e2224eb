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

// Tabular Q-learning with a max, soft or sparse bootstrap target:
//
//   Q(s,a) <- Q(s,a) + eta * (r + gamma * target(Q(s',.)) - Q(s,a))
//
// where target is max, alpha * logsumexp(. / alpha) or alpha * spmax(. / alpha),
// and with sparsemax, softmax or epsilon-greedy behaviour policies.

#ifndef SPARSEMDP_QLEARNING_H_
#define SPARSEMDP_QLEARNING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sparsemdp/mdp.h"
#include "sparsemdp/solvers.h"

namespace sparsemdp {

// Seeded random stream. Draws are built from raw mt19937_64 output so runs
// reproduce across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  // Uniform in {0, ..., n - 1}.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }

 private:
  std::mt19937_64 gen_;
};

// Draws an index from a probability vector. Zero-probability entries are
// never returned.
std::size_t sample_discrete(std::span<const double> probs, Rng& rng);

struct Exploration {
  enum class Kind { kSparsemax, kSoftmax, kEpsGreedy };
  Kind kind = Kind::kSparsemax;
  // Temperature for sparsemax / softmax.
  double alpha = 1.0;
  // Epsilon decays linearly from epsilon_start to epsilon_end over
  // decay_episodes, then stays at epsilon_end.
  double epsilon_start = 0.1;
  double epsilon_end = 0.1;
  long decay_episodes = 1;

  double epsilon_at(long episode) const;
  // Exploration parameter recorded in logs: epsilon or alpha.
  double parameter_at(long episode) const;

  static Exploration sparsemax(double alpha) { return {Kind::kSparsemax, alpha}; }
  static Exploration softmax(double alpha) { return {Kind::kSoftmax, alpha}; }
  static Exploration eps_greedy(double epsilon) {
    return {Kind::kEpsGreedy, 1.0, epsilon, epsilon, 1};
  }
  static Exploration eps_greedy_decay(double start, double end, long episodes) {
    return {Kind::kEpsGreedy, 1.0, start, end, episodes};
  }
};

std::string_view exploration_name(Exploration::Kind kind);
// Accepts "sparsemax", "softmax", "eps-greedy".
std::optional<Exploration::Kind> parse_exploration(std::string_view name);

// eta(n) = scale / (offset + n)^exponent, n being the number of earlier
// updates of the same (s, a). The default 1 / (1 + n)^0.8 satisfies
// sum eta = inf, sum eta^2 < inf.
struct StepSize {
  double scale = 1.0;
  double offset = 1.0;
  double exponent = 0.8;

  double at(long visits) const;
  static StepSize constant(double eta) { return {eta, 1.0, 0.0}; }
};

struct LearnConfig {
  Method update_rule = Method::kSparse;
  // Unused by the max rule.
  double update_alpha = 1.0;
  Exploration exploration;
  long episodes = 1000;
  long horizon = 100;
  StepSize step_size;
  std::uint64_t seed = 0;
  double initial_q = 0.0;
  // Start every episode from a uniform state with a uniform first action.
  bool exploring_starts = false;

  // Throws std::invalid_argument.
  void validate() const;
};

struct QTable {
  Matrix q;
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> visit_counts;

  QTable(std::size_t n_states, std::size_t n_actions, double initial = 0.0);
  std::size_t n_states() const { return static_cast<std::size_t>(q.rows()); }
  std::size_t n_actions() const { return static_cast<std::size_t>(q.cols()); }
};

struct Experience {
  std::size_t state;
  std::size_t action;
  double reward;
  std::size_t next_state;
};

// target(Q(s',.)) for the configured update rule.
double bootstrap_target(std::span<const double> next_q_row,
                        const LearnConfig& config);

// Updates Q(s,a) only, then increments its visit count. Throws
// std::invalid_argument for out-of-range indices or a non-finite reward.
void q_update(QTable& table, const Experience& step, const LearnConfig& config,
              double gamma);

std::size_t select_action(std::span<const double> q_row,
                          const Exploration& exploration, long episode, Rng& rng);

struct StepResult {
  std::size_t next_state;
  double reward;
  bool done;
};

// Sampling interface for model-free learning.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::size_t n_states() const = 0;
  virtual std::size_t n_actions() const = 0;
  virtual double gamma() const = 0;
  virtual std::size_t reset(Rng& rng) = 0;
  virtual StepResult step(std::size_t state, std::size_t action, Rng& rng) = 0;
};

// Samples a TabularMdp. Never signals done; episodes end at the horizon.
class MdpEnvironment : public Environment {
 public:
  explicit MdpEnvironment(const TabularMdp& mdp) : mdp_(mdp) {}
  std::size_t n_states() const override { return mdp_.n_states(); }
  std::size_t n_actions() const override { return mdp_.n_actions(); }
  double gamma() const override { return mdp_.gamma(); }
  std::size_t reset(Rng& rng) override;
  StepResult step(std::size_t state, std::size_t action, Rng& rng) override;

 private:
  const TabularMdp& mdp_;
};

struct TrainResult {
  QTable table;
  // Discounted return of each episode (raw rewards only).
  std::vector<double> episode_returns;
};

// Deterministic given config.seed.
TrainResult train(Environment& env, const LearnConfig& config);

// episode,return,epsilon_or_alpha,rule,exploration,seed
void write_episode_csv(std::ostream& out, const TrainResult& result,
                       const LearnConfig& config);

}  // namespace sparsemdp

#endif  // SPARSEMDP_QLEARNING_H_
