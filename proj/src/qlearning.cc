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

#include "sparsemdp/qlearning.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "format_util.h"
#include "sparsemdp/sparsemax.h"

namespace sparsemdp {
namespace {

constexpr double kGreedyTieTolerance = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

SolverConfig target_config(const LearnConfig& config) {
  SolverConfig sc;
  sc.method = config.update_rule;
  sc.alpha = config.update_alpha;
  return sc;
}

std::size_t greedy_action(std::span<const double> q_row, Rng& rng) {
  const double top = *std::max_element(q_row.begin(), q_row.end());
  std::vector<std::size_t> ties;
  for (std::size_t a = 0; a < q_row.size(); ++a) {
    if (top - q_row[a] <= kGreedyTieTolerance) ties.push_back(a);
  }
  return ties.size() == 1 ? ties.front() : ties[rng.index(ties.size())];
}

}  // namespace

std::size_t sample_discrete(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = probs.size();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] > 0.0)) continue;
    last_positive = i;
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  if (last_positive == probs.size()) {
    throw std::invalid_argument("sample_discrete: no positive probability");
  }
  // Rounding left the cumulative sum just below u.
  return last_positive;
}

double Exploration::epsilon_at(long episode) const {
  if (decay_episodes <= 0 || episode >= decay_episodes) return epsilon_end;
  const double frac = static_cast<double>(episode) / static_cast<double>(decay_episodes);
  return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

double Exploration::parameter_at(long episode) const {
  return kind == Kind::kEpsGreedy ? epsilon_at(episode) : alpha;
}

std::string_view exploration_name(Exploration::Kind kind) {
  switch (kind) {
    case Exploration::Kind::kSparsemax:
      return "sparsemax";
    case Exploration::Kind::kSoftmax:
      return "softmax";
    case Exploration::Kind::kEpsGreedy:
      return "eps-greedy";
  }
  return "unknown";
}

std::optional<Exploration::Kind> parse_exploration(std::string_view name) {
  if (name == "sparsemax") return Exploration::Kind::kSparsemax;
  if (name == "softmax") return Exploration::Kind::kSoftmax;
  if (name == "eps-greedy") return Exploration::Kind::kEpsGreedy;
  return std::nullopt;
}

double StepSize::at(long visits) const {
  return scale / std::pow(offset + static_cast<double>(visits), exponent);
}

void LearnConfig::validate() const {
  target_config(*this).validate();
  require(episodes >= 0, "episodes must be non-negative");
  require(horizon >= 1, "horizon must be positive");
  require(step_size.scale >= 0.0 && std::isfinite(step_size.scale) &&
              step_size.offset > 0.0 && step_size.exponent >= 0.0,
          "step size schedule must be non-negative");
  require(std::isfinite(initial_q), "initial_q must be finite");
  if (exploration.kind == Exploration::Kind::kEpsGreedy) {
    require(exploration.epsilon_start >= 0.0 && exploration.epsilon_start <= 1.0 &&
                exploration.epsilon_end >= 0.0 && exploration.epsilon_end <= 1.0,
            "epsilon must lie in [0, 1]");
  } else {
    require(exploration.alpha > 0.0 && std::isfinite(exploration.alpha),
            "exploration alpha must be positive");
  }
}

QTable::QTable(std::size_t n_states, std::size_t n_actions, double initial)
    : q(Matrix::Constant(static_cast<Eigen::Index>(n_states),
                         static_cast<Eigen::Index>(n_actions), initial)),
      visit_counts(decltype(visit_counts)::Zero(static_cast<Eigen::Index>(n_states),
                                                static_cast<Eigen::Index>(n_actions))) {}

double bootstrap_target(std::span<const double> next_q_row,
                        const LearnConfig& config) {
  return state_value(next_q_row, target_config(config));
}

void q_update(QTable& table, const Experience& step, const LearnConfig& config,
              double gamma) {
  require(step.state < table.n_states() && step.next_state < table.n_states(),
          "q_update: state index out of range");
  require(step.action < table.n_actions(), "q_update: action index out of range");
  require(std::isfinite(step.reward), "q_update: reward must be finite");
  const auto s = static_cast<Eigen::Index>(step.state);
  const auto a = static_cast<Eigen::Index>(step.action);
  const double eta = config.step_size.at(table.visit_counts(s, a));
  const double target =
      step.reward + gamma * bootstrap_target(row_span(table.q, step.next_state), config);
  table.q(s, a) += eta * (target - table.q(s, a));
  ++table.visit_counts(s, a);
}

std::size_t select_action(std::span<const double> q_row,
                          const Exploration& exploration, long episode, Rng& rng) {
  switch (exploration.kind) {
    case Exploration::Kind::kSparsemax: {
      std::vector<double> scaled(q_row.begin(), q_row.end());
      for (double& v : scaled) v /= exploration.alpha;
      return sample_discrete(sparsemax(scaled).probs, rng);
    }
    case Exploration::Kind::kSoftmax:
      return sample_discrete(softmax_distribution(q_row, exploration.alpha), rng);
    case Exploration::Kind::kEpsGreedy:
      if (rng.uniform() < exploration.epsilon_at(episode)) {
        return rng.index(q_row.size());
      }
      return greedy_action(q_row, rng);
  }
  throw std::invalid_argument("unknown exploration kind");
}

std::size_t MdpEnvironment::reset(Rng& rng) {
  const Vector& d = mdp_.initial_dist();
  return sample_discrete(std::span<const double>(d.data(), static_cast<std::size_t>(d.size())),
                         rng);
}

StepResult MdpEnvironment::step(std::size_t state, std::size_t action, Rng& rng) {
  const std::span<const Successor> next = mdp_.successors(state, action);
  std::size_t chosen = next.front().state;
  if (next.size() > 1) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    chosen = next.back().state;
    for (const Successor& sp : next) {
      cumulative += sp.prob;
      if (u < cumulative) {
        chosen = sp.state;
        break;
      }
    }
  }
  return {chosen, mdp_.reward(state, action), false};
}

TrainResult train(Environment& env, const LearnConfig& config) {
  config.validate();
  Rng rng(config.seed);
  TrainResult result{QTable(env.n_states(), env.n_actions(), config.initial_q), {}};
  result.episode_returns.reserve(static_cast<std::size_t>(config.episodes));
  const double gamma = env.gamma();
  for (long episode = 0; episode < config.episodes; ++episode) {
    std::size_t state =
        config.exploring_starts ? rng.index(env.n_states()) : env.reset(rng);
    double discounted_return = 0.0;
    double discount = 1.0;
    for (long t = 0; t < config.horizon; ++t) {
      const std::size_t action =
          (config.exploring_starts && t == 0)
              ? rng.index(env.n_actions())
              : select_action(row_span(result.table.q, state), config.exploration,
                              episode, rng);
      const StepResult out = env.step(state, action, rng);
      q_update(result.table, {state, action, out.reward, out.next_state}, config, gamma);
      discounted_return += discount * out.reward;
      discount *= gamma;
      if (out.done) break;
      state = out.next_state;
    }
    result.episode_returns.push_back(discounted_return);
  }
  return result;
}

void write_episode_csv(std::ostream& out, const TrainResult& result,
                       const LearnConfig& config) {
  out << "episode,return,epsilon_or_alpha,rule,exploration,seed\n";
  const std::string rule(method_name(config.update_rule));
  const std::string exploration(exploration_name(config.exploration.kind));
  for (std::size_t i = 0; i < result.episode_returns.size(); ++i) {
    out << i << ',' << internal::format_real(result.episode_returns[i]) << ','
        << internal::format_real(
               config.exploration.parameter_at(static_cast<long>(i)))
        << ',' << rule << ',' << exploration << ',' << config.seed << '\n';
  }
}

}  // namespace sparsemdp
