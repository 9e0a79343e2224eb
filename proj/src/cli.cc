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

#include "sparsemdp/cli.h"

#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "sparsemdp/environments.h"
#include "sparsemdp/harness.h"
#include "sparsemdp/mdp.h"
#include "sparsemdp/mdp_io.h"
#include "sparsemdp/qlearning.h"
#include "sparsemdp/solvers.h"

namespace sparsemdp {
namespace {

using nlohmann::json;

json vector_json(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const std::span<const double> row = row_span(m, static_cast<std::size_t>(r));
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Reads the "policy" matrix of a JSON document (a solve report qualifies).
StochasticPolicy load_policy(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": malformed JSON: " + e.what());
  }
  auto it = doc.find("policy");
  if (it == doc.end() || !it->is_array() || it->empty() || !(*it)[0].is_array()) {
    throw std::invalid_argument(path + ": field 'policy' must be an array of rows");
  }
  const std::size_t rows = it->size();
  const std::size_t cols = (*it)[0].size();
  Matrix probs(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t s = 0; s < rows; ++s) {
    const json& row = (*it)[s];
    if (!row.is_array() || row.size() != cols) {
      throw std::invalid_argument(path + ": field 'policy' row " + std::to_string(s) +
                                  " has the wrong length");
    }
    for (std::size_t a = 0; a < cols; ++a) {
      if (!row[a].is_number()) {
        throw std::invalid_argument(path + ": field 'policy' entry is not a number");
      }
      probs(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) =
          row[a].get<double>();
    }
  }
  return StochasticPolicy(std::move(probs));
}

Method method_from(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) throw std::invalid_argument("unknown method '" + name + "'");
  return *m;
}

struct SolveArgs {
  std::string mdp;
  std::string method = "sparse";
  double alpha = 1.0;
  double tol = 1e-10;
  long max_iters = 100000;
  std::string out;
};

int cmd_solve(const SolveArgs& args, std::ostream& out) {
  SolverConfig config;
  config.method = method_from(args.method);
  config.alpha = args.alpha;
  config.tolerance = args.tol;
  config.max_iterations = args.max_iters;
  config.validate();

  const TabularMdp mdp = load_mdp(args.mdp);
  const SolveReport report = solve(mdp, config);
  const double residual = bellman_residual(mdp, report, config);

  json doc;
  doc["method"] = args.method;
  doc["alpha"] = config.alpha;
  doc["tolerance"] = config.tolerance;
  doc["max_iterations"] = config.max_iterations;
  doc["n_states"] = mdp.n_states();
  doc["n_actions"] = mdp.n_actions();
  doc["gamma"] = mdp.gamma();
  doc["converged"] = report.converged;
  doc["iterations"] = report.iterations;
  doc["residual"] = residual;
  doc["value"] = vector_json(report.value);
  doc["q_value"] = matrix_json(report.q_value);
  doc["policy"] = matrix_json(report.policy.probs());
  doc["residual_trace"] = report.residual_trace;
  write_text(args.out, doc.dump(1) + "\n");

  out << "solve: method=" << args.method << " states=" << mdp.n_states()
      << " actions=" << mdp.n_actions() << " iterations=" << report.iterations
      << " converged=" << (report.converged ? "yes" : "no") << " residual=" << residual
      << " J=" << mdp.initial_dist().dot(report.value) << "\n";
  return report.converged ? kExitOk : kExitNotConverged;
}

struct EvaluateArgs {
  std::string mdp;
  std::string policy;
  std::string regularizer = "none";
  double alpha = 1.0;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out) {
  Regularizer reg;
  if (args.regularizer == "sparse") {
    reg = Regularizer::sparse(args.alpha);
  } else if (args.regularizer == "soft") {
    reg = Regularizer::soft(args.alpha);
  }
  if (reg.kind != Regularizer::Kind::kNone && !(args.alpha > 0.0)) {
    throw std::invalid_argument("alpha must be positive");
  }
  const TabularMdp mdp = load_mdp(args.mdp);
  const StochasticPolicy policy =
      args.policy.empty() ? StochasticPolicy::uniform(mdp.n_states(), mdp.n_actions())
                          : load_policy(args.policy);
  const PolicyEvaluation eval = evaluate_policy(mdp, policy, reg);
  const double w = tsallis_regularizer(mdp, policy);
  const double h = causal_entropy(mdp, policy);

  json doc;
  doc["regularizer"] = args.regularizer;
  doc["alpha"] = reg.alpha;
  doc["expected_return"] = eval.expected_return;
  doc["tsallis_regularizer"] = w;
  doc["causal_entropy"] = h;
  doc["value"] = vector_json(eval.value);
  doc["q_value"] = matrix_json(eval.q_value);
  doc["visitation"] = vector_json(eval.visitation);
  write_text(args.out, doc.dump(1) + "\n");

  out << "evaluate: regularizer=" << args.regularizer << " J=" << eval.expected_return
      << " W=" << w << " H=" << h << "\n";
  return kExitOk;
}

struct QLearnArgs {
  std::string env;
  std::string mdp;
  std::string exploration = "sparsemax";
  std::string update = "sparse";
  double alpha = 1.0;
  double epsilon = 0.1;
  double epsilon_final = -1.0;
  long epsilon_decay = 0;
  long episodes = 1000;
  long horizon = 100;
  std::uint64_t seed = 0;
  bool exploring_starts = false;
  std::string out;
  std::string q_out;
};

int cmd_qlearn(const QLearnArgs& args, std::ostream& out) {
  LearnConfig config;
  config.update_rule = method_from(args.update);
  config.update_alpha = args.alpha;
  const auto kind = parse_exploration(args.exploration);
  if (!kind) throw std::invalid_argument("unknown exploration '" + args.exploration + "'");
  if (*kind == Exploration::Kind::kEpsGreedy) {
    const double final_eps = args.epsilon_final < 0.0 ? args.epsilon : args.epsilon_final;
    config.exploration = Exploration::eps_greedy_decay(
        args.epsilon, final_eps, args.epsilon_decay > 0 ? args.epsilon_decay : args.episodes);
  } else {
    config.exploration = {*kind, args.alpha};
  }
  config.episodes = args.episodes;
  config.horizon = args.horizon;
  config.seed = args.seed;
  config.exploring_starts = args.exploring_starts;
  config.validate();

  if (args.env.empty() == args.mdp.empty()) {
    throw std::invalid_argument("exactly one of --env or --mdp is required");
  }
  const TabularMdp mdp =
      args.mdp.empty() ? make_environment(args.env, args.seed) : load_mdp(args.mdp);
  MdpEnvironment env(mdp);
  const TrainResult result = train(env, config);

  std::ostringstream csv;
  write_episode_csv(csv, result, config);
  write_text(args.out, csv.str());

  json table;
  table["update"] = args.update;
  table["exploration"] = args.exploration;
  table["alpha"] = args.alpha;
  table["seed"] = args.seed;
  table["episodes"] = args.episodes;
  table["q_value"] = matrix_json(result.table.q);
  json counts = json::array();
  for (Eigen::Index s = 0; s < result.table.visit_counts.rows(); ++s) {
    std::vector<long> row(result.table.visit_counts.row(s).begin(),
                          result.table.visit_counts.row(s).end());
    counts.push_back(row);
  }
  table["visit_counts"] = std::move(counts);
  write_text(args.q_out.empty() ? args.out + ".qtable.json" : args.q_out,
             table.dump(1) + "\n");

  const auto& returns = result.episode_returns;
  const std::size_t tail = std::min<std::size_t>(returns.size(), 100);
  const double tail_mean =
      tail == 0 ? 0.0
                : std::accumulate(returns.end() - static_cast<std::ptrdiff_t>(tail),
                                  returns.end(), 0.0) /
                      static_cast<double>(tail);
  out << "qlearn: " << args.exploration << "+" << args.update << "+" << args.alpha
      << " episodes=" << returns.size() << " mean_return_last_" << tail << "="
      << tail_mean << "\n";
  return kExitOk;
}

struct GapSweepArgs {
  std::string env = "random";
  std::vector<std::size_t> levels = {5, 25, 125, 625};
  double alpha = 1.0;
  double gamma = 0.9;
  std::uint64_t seed = 0;
  std::size_t states = 20;
  double tol = 1e-10;
  long max_iters = 100000;
  std::string out;
};

bool all_converged(const std::vector<ExperimentRecord>& records) {
  for (const ExperimentRecord& r : records) {
    if (!r.converged) return false;
  }
  return true;
}

void summarize(const std::vector<ExperimentRecord>& records, std::ostream& out) {
  for (const ExperimentRecord& r : records) {
    out << method_name(r.method) << " alpha=" << r.alpha << " |A|=" << r.n_actions
        << " J=" << r.expected_return << " gap=" << r.gap << " bound=" << r.bound
        << " support=" << r.support_ratio << (r.converged ? "" : " (not converged)")
        << "\n";
  }
}

int cmd_gap_sweep(const GapSweepArgs& args, std::ostream& out) {
  if (!(args.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  EnvironmentBuilder builder;
  if (args.env == "random") {
    const std::size_t n_states = args.states;
    builder = [n_states](std::size_t n_actions, double gamma, std::uint64_t seed) {
      return build_random_mdp(n_states, n_actions, seed, gamma);
    };
  } else if (args.env == "unicycle") {
    builder = [](std::size_t n_actions, double gamma, std::uint64_t) {
      UnicycleSpec spec = unicycle_spec_with_actions(n_actions);
      spec.gamma = gamma;
      return build_unicycle(spec);
    };
  } else {
    throw std::invalid_argument("unknown environment family '" + args.env +
                                "' (expected random or unicycle)");
  }
  const SweepOptions options{args.tol, args.max_iters};
  const auto records =
      run_gap_sweep(builder, args.levels, args.alpha, args.gamma, args.seed, options);
  append_records_csv(args.out, records);
  summarize(records, out);
  return all_converged(records) ? kExitOk : kExitNotConverged;
}

struct SupportSweepArgs {
  std::string env = "unicycle-25";
  std::vector<double> alphas = {0.1, 1.0, 10.0, 100.0};
  std::uint64_t seed = 0;
  double tol = 1e-10;
  long max_iters = 100000;
  std::string out;
};

int cmd_support_sweep(const SupportSweepArgs& args, std::ostream& out) {
  for (double a : args.alphas) {
    if (!(a > 0.0)) throw std::invalid_argument("alpha must be positive");
  }
  const TabularMdp mdp = make_environment(args.env, args.seed);
  const SweepOptions options{args.tol, args.max_iters};
  const auto records = run_support_sweep(mdp, args.alphas, args.seed, options);
  append_records_csv(args.out, records);
  summarize(records, out);
  return all_converged(records) ? kExitOk : kExitNotConverged;
}

struct GenEnvArgs {
  std::string env;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_env(const GenEnvArgs& args, std::ostream& out) {
  const TabularMdp mdp = make_environment(args.env, args.seed);
  save_mdp(mdp, args.out);
  out << "gen-env: " << args.env << " states=" << mdp.n_states()
      << " actions=" << mdp.n_actions() << " -> " << args.out << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tabular MDP solver with max, soft and sparse Bellman operators",
               "sparsemdp"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Value iteration on an MDP file");
  solve_cmd->add_option("--mdp", solve_args.mdp, "MDP JSON file")->required();
  solve_cmd->add_option("--method", solve_args.method, "max, soft or sparse")
      ->check(CLI::IsMember({"max", "soft", "sparse"}))
      ->capture_default_str();
  solve_cmd->add_option("--alpha", solve_args.alpha, "Regularization coefficient")
      ->capture_default_str();
  solve_cmd->add_option("--tol", solve_args.tol, "Sup-norm stopping tolerance")
      ->capture_default_str();
  solve_cmd->add_option("--max-iters", solve_args.max_iters, "Iteration cap")
      ->capture_default_str();
  solve_cmd->add_option("--out", solve_args.out, "Report JSON path")->required();

  EvaluateArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "Exact evaluation of a policy on an MDP file");
  eval_cmd->add_option("--mdp", eval_args.mdp, "MDP JSON file")->required();
  eval_cmd->add_option("--policy", eval_args.policy,
                       "JSON document with a 'policy' matrix (default: uniform)");
  eval_cmd->add_option("--regularizer", eval_args.regularizer, "none, sparse or soft")
      ->check(CLI::IsMember({"none", "sparse", "soft"}))
      ->capture_default_str();
  eval_cmd->add_option("--alpha", eval_args.alpha, "Regularization coefficient")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_args.out, "Evaluation JSON path")->required();

  QLearnArgs ql_args;
  CLI::App* ql_cmd = app.add_subcommand("qlearn", "Tabular Q-learning");
  ql_cmd->add_option("--env", ql_args.env, "Named environment");
  ql_cmd->add_option("--mdp", ql_args.mdp, "MDP JSON file");
  ql_cmd->add_option("--exploration", ql_args.exploration, "sparsemax, softmax or eps-greedy")
      ->check(CLI::IsMember({"sparsemax", "softmax", "eps-greedy"}))
      ->capture_default_str();
  ql_cmd->add_option("--update", ql_args.update, "max, soft or sparse")
      ->check(CLI::IsMember({"max", "soft", "sparse"}))
      ->capture_default_str();
  ql_cmd->add_option("--alpha", ql_args.alpha,
                     "Coefficient of the update rule and of sparsemax/softmax exploration")
      ->capture_default_str();
  ql_cmd->add_option("--epsilon", ql_args.epsilon, "Initial epsilon (eps-greedy)")
      ->capture_default_str();
  ql_cmd->add_option("--epsilon-final", ql_args.epsilon_final,
                     "Final epsilon (default: no decay)");
  ql_cmd->add_option("--epsilon-decay", ql_args.epsilon_decay,
                     "Episodes of linear epsilon decay (default: all)");
  ql_cmd->add_option("--episodes", ql_args.episodes, "Number of episodes")
      ->capture_default_str();
  ql_cmd->add_option("--horizon", ql_args.horizon, "Steps per episode")
      ->capture_default_str();
  ql_cmd->add_option("--seed", ql_args.seed, "Random seed")->capture_default_str();
  ql_cmd->add_flag("--exploring-starts", ql_args.exploring_starts,
                   "Uniform start state and first action");
  ql_cmd->add_option("--out", ql_args.out, "Episode-return CSV path")->required();
  ql_cmd->add_option("--q-out", ql_args.q_out,
                     "Q table JSON path (default: <out>.qtable.json)");

  GapSweepArgs gap_args;
  CLI::App* gap_cmd =
      app.add_subcommand("gap-sweep", "Performance gap versus number of actions");
  gap_cmd->add_option("--env", gap_args.env, "random or unicycle")
      ->check(CLI::IsMember({"random", "unicycle"}))
      ->capture_default_str();
  gap_cmd->add_option("--levels", gap_args.levels, "Action counts")
      ->delimiter(',')
      ->capture_default_str();
  gap_cmd->add_option("--alpha", gap_args.alpha, "Regularization coefficient")
      ->capture_default_str();
  gap_cmd->add_option("--gamma", gap_args.gamma, "Discount factor")->capture_default_str();
  gap_cmd->add_option("--seed", gap_args.seed, "Random seed")->capture_default_str();
  gap_cmd->add_option("--states", gap_args.states, "States of the random family")
      ->capture_default_str();
  gap_cmd->add_option("--tol", gap_args.tol, "Solver tolerance")->capture_default_str();
  gap_cmd->add_option("--max-iters", gap_args.max_iters, "Solver iteration cap")
      ->capture_default_str();
  gap_cmd->add_option("--out", gap_args.out, "CSV path (appended)")->required();

  SupportSweepArgs sup_args;
  CLI::App* sup_cmd =
      app.add_subcommand("support-sweep", "Supporting-set ratio versus alpha");
  sup_cmd->add_option("--env", sup_args.env, "Named environment")->capture_default_str();
  sup_cmd->add_option("--alphas", sup_args.alphas, "Regularization coefficients")
      ->delimiter(',')
      ->capture_default_str();
  sup_cmd->add_option("--seed", sup_args.seed, "Random seed")->capture_default_str();
  sup_cmd->add_option("--tol", sup_args.tol, "Solver tolerance")->capture_default_str();
  sup_cmd->add_option("--max-iters", sup_args.max_iters, "Solver iteration cap")
      ->capture_default_str();
  sup_cmd->add_option("--out", sup_args.out, "CSV path (appended)")->required();

  GenEnvArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand("gen-env", "Write a named environment as JSON");
  gen_cmd->add_option("--env", gen_args.env, "Named environment")->required();
  gen_cmd->add_option("--seed", gen_args.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_args.out, "MDP JSON path")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_args, out);
    if (*eval_cmd) return cmd_evaluate(eval_args, out);
    if (*ql_cmd) return cmd_qlearn(ql_args, out);
    if (*gap_cmd) return cmd_gap_sweep(gap_args, out);
    if (*sup_cmd) return cmd_support_sweep(sup_args, out);
    if (*gen_cmd) return cmd_gen_env(gen_args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace sparsemdp
