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

#include "sparsemdp/environments.h"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace sparsemdp {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double linspace_at(double lo, double hi, std::size_t n, std::size_t i) {
  if (n == 1) return 0.5 * (lo + hi);
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Nearest index of `value` on an n-point grid starting at `lo` with spacing
// `step`; exact midpoints go to the lower index.
std::size_t snap(double value, double lo, double step, std::size_t n) {
  if (n == 1) return 0;
  const double f = (value - lo) / step;
  if (f <= 0.0) return 0;
  const double base = std::floor(f);
  double idx = (f - base > 0.5) ? base + 1.0 : base;
  idx = std::min(idx, static_cast<double>(n - 1));
  return static_cast<std::size_t>(idx);
}

double grid_step(double lo, double hi, std::size_t n) {
  return n == 1 ? 1.0 : (hi - lo) / static_cast<double>(n - 1);
}

double squared_distance(Point2 a, Point2 b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

Vector uniform_dist(std::size_t n) {
  return Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
}

Matrix zero_reward(std::size_t n_states, std::size_t n_actions) {
  return Matrix::Zero(static_cast<Eigen::Index>(n_states),
                      static_cast<Eigen::Index>(n_actions));
}

// Uniform double in [0, 1) from the top 53 bits of one generator draw.
double unit_interval(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

bool parse_size(std::string_view text, std::size_t& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !text.empty();
}

// "RxC" -> (R, C).
bool parse_dims(std::string_view text, std::size_t& rows, std::size_t& cols) {
  const auto x = text.find('x');
  if (x == std::string_view::npos) return false;
  return parse_size(text.substr(0, x), rows) && parse_size(text.substr(x + 1), cols);
}

}  // namespace

UnicycleSpec unicycle_spec_with_actions(std::size_t n_actions) {
  require(n_actions >= 1, "unicycle needs at least one action");
  UnicycleSpec spec;
  std::size_t n_v = 1;
  for (std::size_t d = 1; d * d <= n_actions; ++d) {
    if (n_actions % d == 0) n_v = d;
  }
  spec.n_velocities = n_v;
  spec.n_turn_rates = n_actions / n_v;
  return spec;
}

std::size_t unicycle_state_index(const UnicycleSpec& spec, UnicycleState state) {
  return (state.ix * spec.ny + state.iy) * spec.n_headings + state.heading;
}

UnicycleState unicycle_state_at(const UnicycleSpec& spec, std::size_t index) {
  const std::size_t heading = index % spec.n_headings;
  const std::size_t cell = index / spec.n_headings;
  return {cell / spec.ny, cell % spec.ny, heading};
}

Point2 unicycle_position(const UnicycleSpec& spec, std::size_t index) {
  const UnicycleState st = unicycle_state_at(spec, index);
  return {linspace_at(spec.x_min, spec.x_max, spec.nx, st.ix),
          linspace_at(spec.y_min, spec.y_max, spec.ny, st.iy)};
}

double unicycle_reward(const UnicycleSpec& spec, Point2 position) {
  return std::exp(-squared_distance(position, spec.goal) /
                  (2.0 * spec.sigma_goal * spec.sigma_goal)) -
         std::exp(-squared_distance(position, spec.avoid) /
                  (2.0 * spec.sigma_avoid * spec.sigma_avoid));
}

TabularMdp build_unicycle(const UnicycleSpec& spec) {
  require(spec.nx >= 1 && spec.ny >= 1 && spec.n_headings >= 1 &&
              spec.n_velocities >= 1 && spec.n_turn_rates >= 1,
          "unicycle resolutions must be at least 1");
  require(spec.sigma_goal > 0.0 && spec.sigma_avoid > 0.0,
          "unicycle reward scales must be positive");
  require(spec.dt > 0.0, "unicycle time step must be positive");
  require(spec.x_max >= spec.x_min && spec.y_max >= spec.y_min,
          "unicycle extents are inverted");
  auto inside = [&](Point2 p) {
    return p[0] >= spec.x_min && p[0] <= spec.x_max && p[1] >= spec.y_min &&
           p[1] <= spec.y_max;
  };
  require(inside(spec.goal), "unicycle grid does not contain the goal point");
  require(inside(spec.avoid), "unicycle grid does not contain the avoid point");

  const std::size_t n_states = spec.n_states();
  const std::size_t n_actions = spec.n_actions();
  const double step_x = grid_step(spec.x_min, spec.x_max, spec.nx);
  const double step_y = grid_step(spec.y_min, spec.y_max, spec.ny);
  const double heading_step = 2.0 * std::numbers::pi / static_cast<double>(spec.n_headings);

  std::vector<TransitionEntry> transitions;
  transitions.reserve(n_states * n_actions);
  Matrix reward = zero_reward(n_states, n_actions);
  for (std::size_t s = 0; s < n_states; ++s) {
    const UnicycleState st = unicycle_state_at(spec, s);
    const Point2 pos = unicycle_position(spec, s);
    const double theta = heading_step * static_cast<double>(st.heading);
    const double r = unicycle_reward(spec, pos);
    for (std::size_t iv = 0; iv < spec.n_velocities; ++iv) {
      const double v = linspace_at(spec.v_min, spec.v_max, spec.n_velocities, iv);
      for (std::size_t iw = 0; iw < spec.n_turn_rates; ++iw) {
        const double w = linspace_at(-spec.turn_rate_max, spec.turn_rate_max,
                                     spec.n_turn_rates, iw);
        const std::size_t a = iv * spec.n_turn_rates + iw;
        const double nx = pos[0] + v * std::cos(theta) * spec.dt;
        const double ny = pos[1] + v * std::sin(theta) * spec.dt;
        const double bins = static_cast<double>(spec.n_headings);
        double heading_f = std::fmod((theta + w * spec.dt) / heading_step, bins);
        if (heading_f < 0.0) heading_f += bins;
        const double base = std::floor(heading_f);
        const double rounded = (heading_f - base > 0.5) ? base + 1.0 : base;
        const std::size_t heading =
            static_cast<std::size_t>(rounded) % spec.n_headings;
        const UnicycleState next{snap(nx, spec.x_min, step_x, spec.nx),
                                 snap(ny, spec.y_min, step_y, spec.ny), heading};
        transitions.push_back({s, a, unicycle_state_index(spec, next), 1.0});
        reward(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) = r;
      }
    }
  }
  return TabularMdp(n_states, n_actions, transitions, std::move(reward), spec.gamma,
                    uniform_dist(n_states));
}

Point2 point_mass_position(const PointMassSpec& spec, std::size_t index) {
  return {linspace_at(-spec.extent, spec.extent, spec.grid, index / spec.grid),
          linspace_at(-spec.extent, spec.extent, spec.grid, index % spec.grid)};
}

Point2 point_mass_velocity(const PointMassSpec& spec, std::size_t action) {
  return {linspace_at(-spec.v_max, spec.v_max, spec.levels, action / spec.levels),
          linspace_at(-spec.v_max, spec.v_max, spec.levels, action % spec.levels)};
}

TabularMdp build_point_mass(const PointMassSpec& spec) {
  require(spec.grid >= 1 && spec.levels >= 1, "point-mass resolutions must be at least 1");
  require(spec.extent > 0.0 && spec.v_max >= 0.0 && spec.dt > 0.0,
          "point-mass extent, velocity bound and time step must be positive");
  for (const RewardBump& b : spec.bumps) {
    require(std::isfinite(b.weight) && std::isfinite(b.center[0]) &&
                std::isfinite(b.center[1]) && b.sigma > 0.0,
            "point-mass reward components must be finite with positive scale");
  }
  const std::size_t n_states = spec.grid * spec.grid;
  const std::size_t n_actions = spec.levels * spec.levels;
  const double step = grid_step(-spec.extent, spec.extent, spec.grid);

  std::vector<TransitionEntry> transitions;
  transitions.reserve(n_states * n_actions);
  Matrix reward = zero_reward(n_states, n_actions);
  for (std::size_t s = 0; s < n_states; ++s) {
    const Point2 pos = point_mass_position(spec, s);
    double r = 0.0;
    for (const RewardBump& b : spec.bumps) {
      r += b.weight * std::exp(-squared_distance(pos, b.center) / (2.0 * b.sigma * b.sigma));
    }
    for (std::size_t a = 0; a < n_actions; ++a) {
      const Point2 vel = point_mass_velocity(spec, a);
      const std::size_t ix = snap(pos[0] + vel[0] * spec.dt, -spec.extent, step, spec.grid);
      const std::size_t iy = snap(pos[1] + vel[1] * spec.dt, -spec.extent, step, spec.grid);
      transitions.push_back({s, a, ix * spec.grid + iy, 1.0});
      reward(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(a)) = r;
    }
  }
  return TabularMdp(n_states, n_actions, transitions, std::move(reward), spec.gamma,
                    uniform_dist(n_states));
}

TabularMdp build_random_mdp(std::size_t n_states, std::size_t n_actions,
                            std::uint64_t seed, double gamma) {
  require(n_states >= 1 && n_actions >= 1, "random MDP sizes must be at least 1");
  std::mt19937_64 gen(seed);
  std::vector<TransitionEntry> transitions;
  transitions.reserve(n_states * n_actions * n_states);
  std::vector<double> row(n_states);
  for (std::size_t s = 0; s < n_states; ++s) {
    for (std::size_t a = 0; a < n_actions; ++a) {
      double total = 0.0;
      for (double& v : row) {
        v = 1.0 - unit_interval(gen);  // (0, 1]
        total += v;
      }
      for (std::size_t sp = 0; sp < n_states; ++sp) {
        transitions.push_back({s, a, sp, row[sp] / total});
      }
    }
  }
  Matrix reward = zero_reward(n_states, n_actions);
  for (Eigen::Index i = 0; i < reward.size(); ++i) reward.data()[i] = unit_interval(gen);
  return TabularMdp(n_states, n_actions, transitions, std::move(reward), gamma,
                    uniform_dist(n_states));
}

TabularMdp build_chain(std::size_t n_states, double gamma) {
  require(n_states >= 1, "chain needs at least one state");
  std::vector<TransitionEntry> transitions;
  Matrix reward = zero_reward(n_states, 2);
  for (std::size_t s = 0; s < n_states; ++s) {
    transitions.push_back({s, 0, s == 0 ? 0 : s - 1, 1.0});
    transitions.push_back({s, 1, s + 1 == n_states ? s : s + 1, 1.0});
  }
  reward(static_cast<Eigen::Index>(n_states - 1), 1) = 1.0;
  reward(0, 0) += 0.2;
  Vector init = Vector::Zero(static_cast<Eigen::Index>(n_states));
  init[0] = 1.0;
  return TabularMdp(n_states, 2, transitions, std::move(reward), gamma, std::move(init));
}

TabularMdp build_gridworld(std::size_t rows, std::size_t cols, double gamma) {
  require(rows >= 1 && cols >= 1, "gridworld needs at least one cell");
  const std::size_t n_states = rows * cols;
  std::vector<TransitionEntry> transitions;
  Matrix reward = zero_reward(n_states, 4);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t s = r * cols + c;
      const std::size_t up = (r == 0 ? r : r - 1) * cols + c;
      const std::size_t down = (r + 1 == rows ? r : r + 1) * cols + c;
      const std::size_t left = r * cols + (c == 0 ? c : c - 1);
      const std::size_t right = r * cols + (c + 1 == cols ? c : c + 1);
      transitions.push_back({s, 0, up, 1.0});
      transitions.push_back({s, 1, down, 1.0});
      transitions.push_back({s, 2, left, 1.0});
      transitions.push_back({s, 3, right, 1.0});
    }
  }
  const std::size_t goal = n_states - 1;
  reward.row(static_cast<Eigen::Index>(goal)).setConstant(1.0);
  if (cols >= 2) reward.row(static_cast<Eigen::Index>(goal - 1)).setConstant(-1.0);
  Vector init = Vector::Zero(static_cast<Eigen::Index>(n_states));
  init[0] = 1.0;
  return TabularMdp(n_states, 4, transitions, std::move(reward), gamma, std::move(init));
}

TabularMdp make_environment(std::string_view name, std::uint64_t seed) {
  std::size_t a = 0;
  std::size_t b = 0;
  if (name == "chain") return build_chain(6);
  if (name.starts_with("chain-") && parse_size(name.substr(6), a) && a >= 1) {
    return build_chain(a);
  }
  if (name == "gridworld") return build_gridworld(5, 5);
  if (name.starts_with("gridworld-") && parse_dims(name.substr(10), a, b) && a >= 1 &&
      b >= 1) {
    return build_gridworld(a, b);
  }
  if (name == "unicycle") return build_unicycle(unicycle_spec_with_actions(25));
  if (name.starts_with("unicycle-") && parse_size(name.substr(9), a) && a >= 1) {
    return build_unicycle(unicycle_spec_with_actions(a));
  }
  if (name == "point-mass-9" || name == "point-mass-49") {
    PointMassSpec spec;
    spec.levels = name == "point-mass-9" ? 3 : 7;
    return build_point_mass(spec);
  }
  if (name == "random") return build_random_mdp(20, 5, seed);
  if (name.starts_with("random-") && parse_dims(name.substr(7), a, b) && a >= 1 &&
      b >= 1) {
    return build_random_mdp(a, b, seed);
  }
  throw std::invalid_argument("unknown environment '" + std::string(name) + "'");
}

}  // namespace sparsemdp
