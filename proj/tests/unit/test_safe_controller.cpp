#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include <nlohmann/json.hpp>

#include "probsafe/control/safe_controller.hpp"
#include "probsafe/evasion/geometry.hpp"
#include "probsafe/evasion/predicates.hpp"
#include "probsafe/evasion/rollout.hpp"
#include "probsafe/evasion/specification.hpp"
#include "probsafe/util/random.hpp"

using namespace probsafe;
using namespace probsafe::evasion;
using control::Mode;
using control::SafeController;
using control::SafeControllerConfig;

namespace {

JointState state_at(double x, double y, double theta) {
  JointState s;
  s.robot.x = x;
  s.robot.y = y;
  s.robot.theta = theta;
  s.robot.v = 0.15;
  s.obstacle.x = 1.5;
  s.obstacle.y = 0.9;
  return s;
}

}  // namespace

TEST(SafeController, TracksPathAtCruise) {
  const TaskConfig task;
  const SafeController ctrl(task);
  const auto cmd = ctrl.command(state_at(0.0, 0.0, 0.0));
  EXPECT_EQ(cmd.mode, Mode::kTrack);
  EXPECT_DOUBLE_EQ(cmd.control.v, 0.15);
  EXPECT_NEAR(cmd.control.omega, 0.0, 1e-12);
  EXPECT_TRUE(cmd.waypoint.isApprox(Eigen::Vector2d(0.15, 0.0)));
}

TEST(SafeController, SteersBackTowardsPath) {
  const TaskConfig task;
  const SafeController ctrl(task);
  EXPECT_LT(ctrl(state_at(0.0, 0.2, 0.0)).omega, 0.0);
  EXPECT_GT(ctrl(state_at(0.0, -0.2, 0.0)).omega, 0.0);
  const auto near_goal = ctrl.command(state_at(0.55, 0.0, 0.0));
  EXPECT_TRUE(near_goal.waypoint.isApprox(task.goal));
}

TEST(SafeController, EncounterTurnsWithSign) {
  const TaskConfig task;
  const SafeController ctrl(task);
  for (int sign : {1, -1}) {
    JointState s = state_at(-0.2, 0.0, 0.0);
    s.encounter = {true, sign};
    const auto cmd = ctrl.command(s);
    EXPECT_EQ(cmd.mode, Mode::kEvadeTurn);
    EXPECT_EQ(sgn(cmd.control.omega), sign);
    EXPECT_LE(std::abs(cmd.control.omega), task.evade_max_rate);
    EXPECT_DOUBLE_EQ(cmd.control.v, 0.15);
    EXPECT_TRUE(cmd.waypoint.isApprox(Eigen::Vector2d(-0.2, sign * 0.3)));
    EXPECT_TRUE(evade(cmd.control.omega, delta_theta(0.0, sign, task.start, task.goal), sign, task));
  }
}

TEST(SafeController, SettledHoldsHeading) {
  const TaskConfig task;
  const SafeController ctrl(task);
  for (double theta : {kPi / 2, kPi / 2 + 0.3, kPi / 2 - 0.005}) {
    JointState s = state_at(-0.2, 0.1, theta);
    s.encounter = {true, 1};
    const auto cmd = ctrl.command(s);
    EXPECT_EQ(cmd.mode, Mode::kEvadeHold);
    EXPECT_LE(std::abs(cmd.control.omega), task.evade_rate_tol);
  }
  JointState s = state_at(-0.2, -0.1, -kPi / 2);
  s.encounter = {true, -1};
  EXPECT_EQ(ctrl.command(s).mode, Mode::kEvadeHold);
}

TEST(SafeController, TrackingIsLipschitzInHeading) {
  const TaskConfig task;
  const SafeController ctrl(task);
  util::Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.uniform(-0.6, 0.4);
    const double y = rng.uniform(-0.3, 0.3);
    const double th = rng.uniform(-1.0, 1.0);
    const double h = 1e-4;
    const double w0 = ctrl(state_at(x, y, th)).omega;
    const double w1 = ctrl(state_at(x, y, th + h)).omega;
    EXPECT_LE(std::abs(w1 - w0), ctrl.config().heading_gain * h + 1e-12);
  }
}

TEST(SafeController, ConfigValidation) {
  const TaskConfig task;
  SafeControllerConfig cfg;
  cfg.cruise_speed = 0.3;
  EXPECT_THROW(SafeController(task, cfg), std::invalid_argument);
  cfg = {};
  cfg.evade_turn_rate = 2.0;
  EXPECT_THROW(SafeController(task, cfg), std::invalid_argument);
  cfg = {};
  cfg.evade_turn_rate = 0.005;
  EXPECT_THROW(SafeController(task, cfg), std::invalid_argument);
  cfg = {};
  cfg.heading_gain = 0.0;
  EXPECT_THROW(SafeController(task, cfg), std::invalid_argument);
}

TEST(SafeController, JsonRoundTrip) {
  SafeControllerConfig cfg;
  cfg.heading_gain = 3.5;
  cfg.waypoint_distance = 0.4;
  const nlohmann::json j = cfg;
  const auto back = j.get<SafeControllerConfig>();
  EXPECT_DOUBLE_EQ(back.heading_gain, 3.5);
  EXPECT_DOUBLE_EQ(back.waypoint_distance, 0.4);
  EXPECT_EQ(nlohmann::json(back), j);
}

TEST(SafeController, RandomEpisodesAreSafe) {
  const TaskConfig task;
  const auto ctrl = std::make_shared<const SafeController>(task);
  const EvasionRolloutSource source(task, ctrl, ctrl);
  const SafetySpecification spec(task);
  int encounters = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    util::Rng rng(util::derive_seed(77, i));
    const auto ic = source.sample_initial_condition(rng);
    const auto episode = run_episode(task, *ctrl, *ctrl, ic, nullptr, rng);
    const stl::Signal& s = episode.signal;
    EXPECT_GE(spec.episode_robustness(s), 0.0) << "episode " << i;
    bool any = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto row = s.state(k);
      if (!collision_possible(robot_from_row(row), obstacle_from_row(row), task)) continue;
      const int sign = static_cast<int>(row[col::kSign]);
      ASSERT_NE(sign, 0) << "episode " << i << " step " << k;
      EXPECT_TRUE(evade(row[col::kAppliedOmega], row[col::kDeltaTheta], sign, task))
          << "episode " << i << " step " << k;
      any = true;
    }
    encounters += any ? 1 : 0;
  }
  EXPECT_GT(encounters, 50);
}
