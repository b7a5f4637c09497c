#pragma once

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "probsafe/evasion/dynamics.hpp"
#include "probsafe/verify/interval_box.hpp"

namespace probsafe::evasion {

struct TaskConfig {
  double dt = 0.033;           ///< s
  int horizon = 300;           ///< K_max
  double danger_radius = 0.4;  ///< m
  double lookahead = 1.0;      ///< s, projection horizon of mindistance
  Eigen::Vector2d start{-0.6, 0.0};
  Eigen::Vector2d goal{0.6, 0.0};
  double goal_radius = 0.05;        ///< m
  double initial_robot_speed = 0.0;  ///< m/s; initial heading is the optimal one
  verify::IntervalBox arena{{-1.6, -1.0}, {1.6, 1.0}, {"m", "m"}};
  ActuatorLimits limits;

  // evade predicate thresholds
  double evade_max_rate = 1.5;    ///< rad/s
  double evade_angle_tol = 0.01;  ///< rad
  double evade_rate_tol = 0.01;   ///< rad/s
  /// Extra distance above danger_radius before an open encounter closes.
  double encounter_release_margin = 0.05;

  // Obstacle initial conditions: position uniform in this box (clipped to
  // the arena), heading uniform in (-pi, pi], speed uniform in the range.
  verify::IntervalBox obstacle_region{{-0.4, -0.6}, {0.8, 0.6}, {"m", "m"}};
  double obstacle_speed_min = 0.05;
  double obstacle_speed_max = 0.15;

  // reward
  double r_diff = 200.0;
  bool auto_calibrate_reward = true;
  double target_episode_return = 5.0;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

void to_json(nlohmann::json& j, const TaskConfig& cfg);
/// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, TaskConfig& cfg);

}  // namespace probsafe::evasion
