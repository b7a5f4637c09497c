#pragma once

#include <Eigen/Core>

namespace probsafe::evasion {

inline constexpr double kPi = 3.14159265358979323846;

/// Unit heading vector [cos phi, sin phi].
Eigen::Vector2d a2v(double phi);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// z-component of the planar cross product a x b.
double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

/// -1, 0 or +1.
int sgn(double x);

/// Closest point to p on the segment [a, b].
Eigen::Vector2d closest_point_on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                         const Eigen::Vector2d& b);

}  // namespace probsafe::evasion
