#include "probsafe/evasion/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "probsafe/evasion/geometry.hpp"

namespace probsafe::evasion {

double mindistance(const KinematicState& robot, const KinematicState& obstacle, double dt, double lookahead) {
  if (!(dt > 0.0)) throw std::invalid_argument("mindistance needs dt > 0");
  if (!robot.finite() || !obstacle.finite()) throw std::domain_error("mindistance on non-finite state");
  const Eigen::Vector2d dp = robot.position() - obstacle.position();
  const Eigen::Vector2d dv = a2v(robot.theta) * robot.v - a2v(obstacle.theta) * obstacle.v;
  const auto steps = static_cast<int>(std::floor(lookahead / dt + 1e-9));
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= steps; ++j) {
    const double t = static_cast<double>(j) * dt;
    best = std::min(best, (dp + dv * t).norm());
  }
  return best;
}

double infront_margin(const RobotState& robot, const ObstacleState& obstacle) {
  return (obstacle.position() - robot.position()).dot(a2v(robot.theta));
}

bool infront(const RobotState& robot, const ObstacleState& obstacle) {
  return infront_margin(robot, obstacle) >= 0.0;
}

bool collision_possible(const RobotState& robot, const ObstacleState& obstacle, const TaskConfig& cfg) {
  return infront(robot, obstacle) && mindistance(robot, obstacle, cfg.dt, cfg.lookahead) <= cfg.danger_radius;
}

EncounterCase classify_encounter(const RobotState& robot, const ObstacleState& obstacle) {
  const Eigen::Vector2d heading = a2v(robot.theta);
  const Eigen::Vector2d obstacle_heading = a2v(obstacle.theta);
  const double side = cross2(heading, obstacle.position() - robot.position());
  if (heading.dot(obstacle_heading) < 0.0) {
    return side <= 0.0 ? EncounterCase::kOpposingNegativeSide : EncounterCase::kOpposingPositiveSide;
  }
  const double motion = cross2(heading, obstacle_heading);
  if (motion < 0.0) return EncounterCase::kCrossingFromPositive;
  if (motion > 0.0) return EncounterCase::kCrossingFromNegative;
  return side <= 0.0 ? EncounterCase::kCrossingFromPositive : EncounterCase::kCrossingFromNegative;
}

int evade_sign(const RobotState& robot, const ObstacleState& obstacle) {
  switch (classify_encounter(robot, obstacle)) {
    case EncounterCase::kOpposingNegativeSide:
    case EncounterCase::kCrossingFromPositive: return 1;
    case EncounterCase::kOpposingPositiveSide:
    case EncounterCase::kCrossingFromNegative: return -1;
  }
  return 1;
}

double optimal_heading(const Eigen::Vector2d& start, const Eigen::Vector2d& goal) {
  const Eigen::Vector2d d = goal - start;
  return std::atan2(d.y(), d.x());
}

double delta_theta(double theta, int sign, const Eigen::Vector2d& start, const Eigen::Vector2d& goal) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("turning sign must be +1 or -1");
  const double reference = optimal_heading(start, goal) + sign * (kPi / 2.0);
  return sign * wrap_angle(theta - reference);
}

bool evade(double theta_dot, double delta_theta, int sign, const TaskConfig& cfg) {
  const bool turning = std::abs(theta_dot) <= cfg.evade_max_rate && sgn(theta_dot) == sign;
  const bool settled = (delta_theta >= 0.0 || std::abs(delta_theta) <= cfg.evade_angle_tol) &&
                       cfg.evade_rate_tol >= std::abs(theta_dot);
  return turning || settled;
}

}  // namespace probsafe::evasion
