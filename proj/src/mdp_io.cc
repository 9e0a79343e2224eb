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

#include "sparsemdp/mdp_io.h"

#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace sparsemdp {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw MdpFormatError("field '" + field + "': " + what);
}

// `where` is the path reported in diagnostics; defaults to `name`.
const json& field(const json& doc, const std::string& name, const std::string& where = "") {
  auto it = doc.find(name);
  if (it == doc.end()) fail(where.empty() ? name : where, "missing");
  return *it;
}

std::size_t as_index(const json& v, const std::string& name) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    fail(name, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

double as_real(const json& v, const std::string& name) {
  if (!v.is_number()) fail(name, "expected a number");
  return v.get<double>();
}

}  // namespace

TabularMdp parse_mdp(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MdpFormatError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw MdpFormatError("document must be a JSON object");

  const std::size_t n_states = as_index(field(doc, "n_states"), "n_states");
  const std::size_t n_actions = as_index(field(doc, "n_actions"), "n_actions");
  if (n_states == 0) fail("n_states", "must be at least 1");
  if (n_actions == 0) fail("n_actions", "must be at least 1");
  const double gamma = as_real(field(doc, "gamma"), "gamma");

  const json& init = field(doc, "initial_dist");
  if (!init.is_array() || init.size() != n_states) {
    fail("initial_dist", "expected an array of n_states numbers");
  }
  Vector initial_dist(static_cast<Eigen::Index>(n_states));
  for (std::size_t s = 0; s < n_states; ++s) {
    initial_dist[static_cast<Eigen::Index>(s)] =
        as_real(init[s], "initial_dist[" + std::to_string(s) + "]");
  }

  const json& rew = field(doc, "reward");
  Matrix reward(static_cast<Eigen::Index>(n_states),
                static_cast<Eigen::Index>(n_actions));
  if (!rew.is_array()) fail("reward", "expected an array");
  if (rew.size() == n_states * n_actions && (rew.empty() || !rew[0].is_array())) {
    for (std::size_t i = 0; i < rew.size(); ++i) {
      reward.data()[i] = as_real(rew[i], "reward[" + std::to_string(i) + "]");
    }
  } else if (rew.size() == n_states) {
    for (std::size_t s = 0; s < n_states; ++s) {
      if (!rew[s].is_array() || rew[s].size() != n_actions) {
        fail("reward", "row " + std::to_string(s) + " must have n_actions entries");
      }
      for (std::size_t a = 0; a < n_actions; ++a) {
        reward(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) =
            as_real(rew[s][a], "reward[" + std::to_string(s) + "][" +
                                   std::to_string(a) + "]");
      }
    }
  } else {
    fail("reward", "expected n_states * n_actions numbers in row-major order");
  }

  const json& trans = field(doc, "transitions");
  if (!trans.is_array()) fail("transitions", "expected an array of records");
  std::vector<TransitionEntry> entries;
  entries.reserve(trans.size());
  for (std::size_t i = 0; i < trans.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    const json& rec = trans[i];
    if (!rec.is_object()) fail(where, "expected an object {s, a, sp, p}");
    entries.push_back({as_index(field(rec, "s", where + ".s"), where + ".s"),
                       as_index(field(rec, "a", where + ".a"), where + ".a"),
                       as_index(field(rec, "sp", where + ".sp"), where + ".sp"),
                       as_real(field(rec, "p", where + ".p"), where + ".p")});
  }

  try {
    return TabularMdp(n_states, n_actions, entries, std::move(reward), gamma,
                      std::move(initial_dist), kFileRowTolerance);
  } catch (const std::invalid_argument& e) {
    throw MdpFormatError(e.what());
  }
}

TabularMdp load_mdp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MdpFormatError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_mdp(buffer.str());
}

std::string serialize_mdp(const TabularMdp& mdp) {
  json doc;
  doc["n_states"] = mdp.n_states();
  doc["n_actions"] = mdp.n_actions();
  doc["gamma"] = mdp.gamma();
  doc["initial_dist"] = std::vector<double>(
      mdp.initial_dist().data(), mdp.initial_dist().data() + mdp.initial_dist().size());
  doc["reward"] = std::vector<double>(mdp.reward().data(),
                                      mdp.reward().data() + mdp.reward().size());
  json trans = json::array();
  for (const TransitionEntry& e : mdp.transition_entries()) {
    trans.push_back({{"s", e.state}, {"a", e.action}, {"sp", e.next_state}, {"p", e.prob}});
  }
  doc["transitions"] = std::move(trans);
  return doc.dump() + "\n";
}

void save_mdp(const TabularMdp& mdp, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_mdp(mdp);
}

}  // namespace sparsemdp
