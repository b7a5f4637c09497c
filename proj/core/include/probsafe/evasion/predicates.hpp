#pragma once

#include <Eigen/Core>

#include "probsafe/evasion/task_config.hpp"
#include "probsafe/evasion/types.hpp"

namespace probsafe::evasion {

/// Minimum distance between constant-velocity projections of robot and
/// obstacle over t in {0, dt, 2dt, ...} up to and including `lookahead`.
double mindistance(const KinematicState& robot, const KinematicState& obstacle, double dt, double lookahead);

/// Signed offset of the obstacle from the line through the robot
/// perpendicular to its heading; >= 0 means in front.
double infront_margin(const RobotState& robot, const ObstacleState& obstacle);
bool infront(const RobotState& robot, const ObstacleState& obstacle);

/// infront && mindistance <= danger_radius.
bool collision_possible(const RobotState& robot, const ObstacleState& obstacle, const TaskConfig& cfg);

/// The four encounter cases. Odd cases turn with a positive turn rate
/// (sign +1), even cases with a negative one.
enum class EncounterCase { kOpposingNegativeSide = 1, kOpposingPositiveSide = 2,
                           kCrossingFromPositive = 3, kCrossingFromNegative = 4 };

/// Case classification.
///
/// "Side" is the sign of a2v(theta_r) x (p_o - p_r): positive when the
/// obstacle lies on the side a positive turn rate rotates towards.
///  - Opposing (a2v(theta_r) . a2v(theta_o) < 0): turn away from the
///    obstacle. Negative or zero side is case 1, positive side case 2.
///  - Crossing or same direction (dot >= 0): turn towards the side the
///    obstacle is coming from so the robot passes behind it, judged from
///    a2v(theta_r) x a2v(theta_o). Motion towards the negative side is
///    case 3, towards the positive side case 4; parallel motion falls back
///    to the position side.
EncounterCase classify_encounter(const RobotState& robot, const ObstacleState& obstacle);

/// +1 for cases 1 and 3, -1 for cases 2 and 4.
int evade_sign(const RobotState& robot, const ObstacleState& obstacle);

/// Heading of the straight start -> goal path.
double optimal_heading(const Eigen::Vector2d& start, const Eigen::Vector2d& goal);

/// Orientation gap to the heading perpendicular to the start -> goal path,
/// measured in the direction of turning: the reference is
/// optimal + sign*pi/2 and the gap is sign * wrap(theta - reference), so it
/// is negative before the turn completes and >= 0 once the robot has
/// rotated onto or past the perpendicular. Result lies in [-pi, pi].
double delta_theta(double theta, int sign, const Eigen::Vector2d& start, const Eigen::Vector2d& goal);

/// (|theta_dot| <= max_rate && sgn(theta_dot) == sign)
///   || ((delta_theta >= 0 || |delta_theta| <= angle_tol) && |theta_dot| <= rate_tol)
bool evade(double theta_dot, double delta_theta, int sign, const TaskConfig& cfg);

}  // namespace probsafe::evasion
