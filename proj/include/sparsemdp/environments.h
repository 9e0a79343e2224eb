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

// Deterministic builders for the test domains. Every builder is a pure
// function of its arguments.

#ifndef SPARSEMDP_ENVIRONMENTS_H_
#define SPARSEMDP_ENVIRONMENTS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sparsemdp/mdp.h"

namespace sparsemdp {

using Point2 = std::array<double, 2>;

// Unicycle on a position x heading grid. One Euler step of
//   x' = x + v cos(theta) dt,  y' = y + v sin(theta) dt,  theta' = theta + w dt
// snapped to the nearest grid state (positions clamped to the extents).
// Reward, independent of the action:
//   r(x) = exp(-|x - goal|^2 / (2 sigma_goal^2))
//        - exp(-|x - avoid|^2 / (2 sigma_avoid^2))
struct UnicycleSpec {
  double x_min = 0.0;
  double x_max = 20.0;
  double y_min = 0.0;
  double y_max = 20.0;
  std::size_t nx = 21;
  std::size_t ny = 21;
  std::size_t n_headings = 8;

  double v_min = 0.0;
  double v_max = 2.0;
  std::size_t n_velocities = 5;
  // Turn rates span [-turn_rate_max, turn_rate_max].
  double turn_rate_max = 3.14159265358979323846;
  std::size_t n_turn_rates = 5;
  double dt = 0.5;

  Point2 goal = {15.0, 15.0};
  Point2 avoid = {5.0, 5.0};
  double sigma_goal = 5.0;
  double sigma_avoid = 5.0;

  double gamma = 0.9;

  std::size_t n_states() const { return nx * ny * n_headings; }
  std::size_t n_actions() const { return n_velocities * n_turn_rates; }
};

// Default spec with the action grid factored as n_velocities x n_turn_rates,
// n_velocities being the largest divisor of n_actions not above its square
// root (5 -> 1x5, 25 -> 5x5, 125 -> 5x25, 625 -> 25x25).
UnicycleSpec unicycle_spec_with_actions(std::size_t n_actions);

struct UnicycleState {
  std::size_t ix, iy, heading;
};
std::size_t unicycle_state_index(const UnicycleSpec& spec, UnicycleState state);
UnicycleState unicycle_state_at(const UnicycleSpec& spec, std::size_t index);
Point2 unicycle_position(const UnicycleSpec& spec, std::size_t index);
double unicycle_reward(const UnicycleSpec& spec, Point2 position);

// Throws std::invalid_argument for a spec whose extents do not contain the
// goal and avoid points, or with a zero resolution or non-positive sigma.
// Initial distribution is uniform over states.
TabularMdp build_unicycle(const UnicycleSpec& spec);

struct RewardBump {
  Point2 center;
  double weight;
  double sigma;
};

// Point mass on a square grid over [-extent, extent]^2 with a velocity
// action grid of levels x levels over [-v_max, v_max]^2.
struct PointMassSpec {
  double extent = 10.0;
  std::size_t grid = 21;
  double v_max = 3.0;
  // 3 gives 9 actions, 7 gives 49.
  std::size_t levels = 3;
  double dt = 1.0;
  std::vector<RewardBump> bumps = {{{5.0, 5.0}, 1.0, 2.5},
                                   {{-5.0, 5.0}, 1.0, 2.5},
                                   {{-5.0, -5.0}, 1.0, 2.5},
                                   {{5.0, -5.0}, 1.0, 2.5}};
  double gamma = 0.9;
};

Point2 point_mass_position(const PointMassSpec& spec, std::size_t index);
Point2 point_mass_velocity(const PointMassSpec& spec, std::size_t action);
TabularMdp build_point_mass(const PointMassSpec& spec);

// Rows are normalized vectors of uniform(0, 1] draws; rewards are uniform in
// [0, 1); initial distribution is uniform. Reproducible from the seed across
// platforms (raw mt19937_64 output, no std distributions).
TabularMdp build_random_mdp(std::size_t n_states, std::size_t n_actions,
                            std::uint64_t seed, double gamma = 0.9);

// Deterministic chain; action 0 steps left, action 1 steps right (clamped).
// Stepping right from the last state pays 1; stepping left from state 0
// pays 0.2. Starts in state 0.
TabularMdp build_chain(std::size_t n_states, double gamma = 0.9);

// Deterministic grid; actions up, down, left, right (clamped at walls).
// Every action taken in the bottom-right cell pays 1, every action taken in
// the cell left of it pays -1. Starts in the top-left cell.
TabularMdp build_gridworld(std::size_t rows, std::size_t cols, double gamma = 0.9);

// Named environments: chain, chain-N, gridworld, gridworld-RxC, unicycle,
// unicycle-A, point-mass-9, point-mass-49, random, random-SxA. `seed` only
// affects the random family. Throws std::invalid_argument for unknown names.
TabularMdp make_environment(std::string_view name, std::uint64_t seed = 0);

}  // namespace sparsemdp

#endif  // SPARSEMDP_ENVIRONMENTS_H_
