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

#include <cmath>
#include <set>
#include <stdexcept>

#include <gtest/gtest.h>

#include "sparsemdp/mdp_io.h"

namespace sparsemdp {
namespace {

void expect_stochastic(const TabularMdp& mdp, double tol) {
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
      double total = 0.0;
      for (const Successor& sp : mdp.successors(s, a)) total += sp.prob;
      ASSERT_NEAR(total, 1.0, tol) << "s=" << s << " a=" << a;
    }
  }
}

TEST(UnicycleTest, ActionFactoring) {
  const std::pair<std::size_t, std::size_t> expected[] = {{5, 1}, {25, 5}, {125, 5}, {625, 25}};
  for (auto [n, n_v] : expected) {
    const UnicycleSpec spec = unicycle_spec_with_actions(n);
    EXPECT_EQ(spec.n_velocities, n_v);
    EXPECT_EQ(spec.n_actions(), n);
  }
}

TEST(UnicycleTest, StateIndexRoundTrip) {
  const UnicycleSpec spec;
  for (std::size_t s = 0; s < spec.n_states(); s += 37) {
    EXPECT_EQ(unicycle_state_index(spec, unicycle_state_at(spec, s)), s);
  }
}

TEST(UnicycleTest, StandingStillIsASelfLoop) {
  const UnicycleSpec spec;  // 5 x 5 actions; middle turn rate is 0.
  const TabularMdp mdp = build_unicycle(spec);
  const std::size_t still = 0 * spec.n_turn_rates + spec.n_turn_rates / 2;
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    const auto next = mdp.successors(s, still);
    ASSERT_EQ(next.size(), 1u);
    ASSERT_EQ(next[0].state, s);
  }
  expect_stochastic(mdp, 0.0);
}

TEST(UnicycleTest, RewardAtGoal) {
  const UnicycleSpec spec;
  const double d2 = 10.0 * 10.0 + 10.0 * 10.0;
  EXPECT_NEAR(unicycle_reward(spec, spec.goal),
              1.0 - std::exp(-d2 / (2.0 * spec.sigma_avoid * spec.sigma_avoid)), 1e-15);
  const TabularMdp mdp = build_unicycle(spec);
  const std::size_t goal = unicycle_state_index(spec, {15, 15, 3});
  EXPECT_EQ(unicycle_position(spec, goal), spec.goal);
  for (std::size_t a = 0; a < mdp.n_actions(); ++a) {
    EXPECT_DOUBLE_EQ(mdp.reward(goal, a), unicycle_reward(spec, spec.goal));
  }
}

TEST(UnicycleTest, ForwardMotionFollowsHeading) {
  const UnicycleSpec spec;
  const TabularMdp mdp = build_unicycle(spec);
  // Heading 0 faces +x; top speed 2 for dt 0.5 moves exactly one cell.
  const std::size_t fast_straight = (spec.n_velocities - 1) * spec.n_turn_rates + 2;
  const std::size_t s = unicycle_state_index(spec, {4, 7, 0});
  EXPECT_EQ(mdp.successors(s, fast_straight)[0].state, unicycle_state_index(spec, {5, 7, 0}));
  // At the wall the position clamps.
  const std::size_t edge = unicycle_state_index(spec, {20, 7, 0});
  EXPECT_EQ(mdp.successors(edge, fast_straight)[0].state, edge);
  // Heading 2 faces +y.
  const std::size_t up = unicycle_state_index(spec, {4, 7, 2});
  EXPECT_EQ(mdp.successors(up, fast_straight)[0].state, unicycle_state_index(spec, {4, 8, 2}));
}

TEST(UnicycleTest, RejectsGoalOutsideGrid) {
  UnicycleSpec spec;
  spec.goal = {25.0, 15.0};
  EXPECT_THROW(build_unicycle(spec), std::invalid_argument);
  spec = UnicycleSpec{};
  spec.avoid = {-1.0, 0.0};
  EXPECT_THROW(build_unicycle(spec), std::invalid_argument);
}

TEST(PointMassTest, VelocityGrids) {
  PointMassSpec spec;
  std::set<std::pair<double, double>> v9;
  for (std::size_t a = 0; a < 9; ++a) {
    const Point2 v = point_mass_velocity(spec, a);
    v9.insert({v[0], v[1]});
  }
  EXPECT_EQ(v9.size(), 9u);
  EXPECT_TRUE(v9.count({-3.0, -3.0}) && v9.count({0.0, 0.0}) && v9.count({3.0, 3.0}));
  EXPECT_EQ(build_point_mass(spec).n_actions(), 9u);
  spec.levels = 7;
  EXPECT_EQ(build_point_mass(spec).n_actions(), 49u);
  EXPECT_EQ(make_environment("point-mass-49").n_actions(), 49u);
}

TEST(PointMassTest, ZeroVelocityIsASelfLoop) {
  const PointMassSpec spec;
  const TabularMdp mdp = build_point_mass(spec);
  const std::size_t still = 4;
  ASSERT_EQ(point_mass_velocity(spec, still), (Point2{0.0, 0.0}));
  for (std::size_t s = 0; s < mdp.n_states(); ++s) {
    ASSERT_EQ(mdp.successors(s, still)[0].state, s);
  }
}

TEST(RandomMdpTest, SeedDeterminism) {
  const TabularMdp a = build_random_mdp(10, 4, 99), b = build_random_mdp(10, 4, 99);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(serialize_mdp(a), serialize_mdp(b));
  const TabularMdp c = build_random_mdp(10, 4, 100);
  EXPECT_NE(a.reward(), c.reward());
  expect_stochastic(a, 1e-12);
}

TEST(ChainTest, Structure) {
  const TabularMdp mdp = build_chain(6, 0.9);
  EXPECT_EQ(mdp.successors(0, 0)[0].state, 0u);
  EXPECT_EQ(mdp.successors(2, 1)[0].state, 3u);
  EXPECT_EQ(mdp.successors(5, 1)[0].state, 5u);
  EXPECT_EQ(mdp.reward(5, 1), 1.0);
  EXPECT_EQ(mdp.reward(0, 0), 0.2);
  EXPECT_EQ(mdp.initial_dist()(0), 1.0);
}

TEST(GridworldTest, Structure) {
  const TabularMdp mdp = build_gridworld(3, 4, 0.9);
  EXPECT_EQ(mdp.n_states(), 12u);
  EXPECT_EQ(mdp.n_actions(), 4u);
  EXPECT_EQ(mdp.reward(11, 0), 1.0);
  EXPECT_EQ(mdp.reward(10, 2), -1.0);
  expect_stochastic(mdp, 0.0);
}

TEST(MakeEnvironmentTest, Names) {
  EXPECT_EQ(make_environment("chain").n_states(), 6u);
  EXPECT_EQ(make_environment("chain-9").n_states(), 9u);
  EXPECT_EQ(make_environment("gridworld").n_states(), 25u);
  EXPECT_EQ(make_environment("gridworld-2x7").n_states(), 14u);
  EXPECT_EQ(make_environment("unicycle").n_actions(), 25u);
  EXPECT_EQ(make_environment("unicycle-5").n_actions(), 5u);
  EXPECT_EQ(make_environment("random").n_states(), 20u);
  const TabularMdp r = make_environment("random-3x2", 4);
  EXPECT_TRUE(r == build_random_mdp(3, 2, 4));
  for (const char* bad : {"", "maze", "chain-", "chain-x", "gridworld-3", "random-0x2"}) {
    EXPECT_THROW(make_environment(bad), std::invalid_argument) << bad;
  }
}

}  // namespace
}  // namespace sparsemdp
