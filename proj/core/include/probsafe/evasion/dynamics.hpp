#pragma once

#include "probsafe/evasion/types.hpp"

namespace probsafe::evasion {

struct ActuatorLimits {
  double v_min = 0.0;      ///< m/s
  double v_max = 0.2;      ///< m/s
  double omega_max = 3.6;  ///< rad/s, symmetric
};

/// Unicycle Euler step: position advances along the current heading,
/// heading by omega*dt (wrapped), speed becomes the commanded speed.
/// Throws std::domain_error on non-finite input.
RobotState step(const RobotState& robot, const Control& u, double dt);

/// Non-reactive obstacle: constant speed and heading.
ObstacleState advance(const ObstacleState& obstacle, double dt);

Control clamp_control(const Control& u, const ActuatorLimits& limits);

}  // namespace probsafe::evasion
