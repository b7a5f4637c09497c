#pragma once

#include <Eigen/Core>

namespace probsafe::evasion {

struct KinematicState {
  double x = 0.0;      ///< m
  double y = 0.0;      ///< m
  double theta = 0.0;  ///< rad, (-pi, pi]
  double v = 0.0;      ///< m/s along the heading

  Eigen::Vector2d position() const { return {x, y}; }
  bool finite() const;
};

struct RobotState : KinematicState {};
struct ObstacleState : KinematicState {};

/// Unicycle input.
struct Control {
  double v = 0.0;      ///< m/s
  double omega = 0.0;  ///< rad/s

  bool operator==(const Control&) const = default;
};

/// Encounter bookkeeping kept by the environment.
///
/// An encounter opens when the obstacle is in front of the robot and the
/// projected minimum distance drops to the danger radius; its turning sign
/// is classified once at that moment and held until the encounter closes
/// (obstacle behind or projected distance above the release threshold).
struct Encounter {
  bool active = false;
  int sign = 0;  ///< +1 / -1 while active, 0 otherwise.
};

struct JointState {
  RobotState robot;
  ObstacleState obstacle;
  Encounter encounter;
  int step = 0;
};

}  // namespace probsafe::evasion
