#include "probsafe/evasion/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "probsafe/evasion/geometry.hpp"

namespace probsafe::evasion {

bool KinematicState::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta) && std::isfinite(v);
}

RobotState step(const RobotState& robot, const Control& u, double dt) {
  if (!robot.finite() || !std::isfinite(u.v) || !std::isfinite(u.omega) || !std::isfinite(dt)) {
    throw std::domain_error("unicycle step received a non-finite input");
  }
  RobotState next;
  next.x = robot.x + u.v * std::cos(robot.theta) * dt;
  next.y = robot.y + u.v * std::sin(robot.theta) * dt;
  next.theta = wrap_angle(robot.theta + u.omega * dt);
  next.v = u.v;
  return next;
}

ObstacleState advance(const ObstacleState& obstacle, double dt) {
  if (!obstacle.finite()) throw std::domain_error("obstacle state is non-finite");
  ObstacleState next = obstacle;
  next.x += obstacle.v * std::cos(obstacle.theta) * dt;
  next.y += obstacle.v * std::sin(obstacle.theta) * dt;
  return next;
}

Control clamp_control(const Control& u, const ActuatorLimits& limits) {
  return {std::clamp(u.v, limits.v_min, limits.v_max), std::clamp(u.omega, -limits.omega_max, limits.omega_max)};
}

}  // namespace probsafe::evasion
