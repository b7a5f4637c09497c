#include "probsafe/evasion/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace probsafe::evasion {

Eigen::Vector2d a2v(double phi) { return {std::cos(phi), std::sin(phi)}; }

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * kPi;
  double r = std::fmod(angle + kPi, two_pi);
  if (r < 0.0) r += two_pi;
  r -= kPi;
  // fmod lands on [-pi, pi); move the closed end to +pi.
  return r <= -kPi ? kPi : r;
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

int sgn(double x) { return (x > 0.0) - (x < 0.0); }

Eigen::Vector2d closest_point_on_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                         const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

}  // namespace probsafe::evasion
