#include "probsafe/rl/action_mask.hpp"

#include <algorithm>
#include <cmath>

namespace probsafe::rl {

ActionMask::ActionMask(verify::IntervalBox expansion) : expansion_(std::move(expansion)) {
  if (expansion_.dimension() != 2) throw std::invalid_argument("action mask needs a 2-D expansion set");
  if (!expansion_.contains_origin()) throw std::invalid_argument("expansion set must contain the origin");
}

evasion::Control ActionMask::apply(const Eigen::Vector2d& raw, const evasion::Control& safe) const {
  const auto& lo = expansion_.lower();
  const auto& hi = expansion_.upper();
  const double base[2] = {safe.v, safe.omega};
  double out[2];
  for (int i = 0; i < 2; ++i) {
    const double r = std::clamp(raw[i], -1.0, 1.0);
    const double value = base[i] + (r + 1.0) / 2.0 * (hi[i] - lo[i]) + lo[i];
    out[i] = std::clamp(value, base[i] + lo[i], base[i] + hi[i]);
  }
  return {out[0], out[1]};
}

bool ActionMask::contains(const evasion::Control& applied, const evasion::Control& safe) const {
  const auto& lo = expansion_.lower();
  const auto& hi = expansion_.upper();
  return applied.v >= safe.v + lo[0] && applied.v <= safe.v + hi[0] && applied.omega >= safe.omega + lo[1] &&
         applied.omega <= safe.omega + hi[1];
}

double ActionMask::normalized_difference(const evasion::Control& applied, const evasion::Control& safe) const {
  const double diff[2] = {applied.v - safe.v, applied.omega - safe.omega};
  double sq = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double scale = std::max(std::abs(expansion_.lower()[i]), std::abs(expansion_.upper()[i]));
    if (scale > 0.0) sq += (diff[i] / scale) * (diff[i] / scale);
  }
  return std::sqrt(sq / 2.0);
}

evasion::Control mask_action(const Eigen::Vector2d& raw, const evasion::Control& safe, const ActionMask& mask) {
  return mask.apply(raw, safe);
}

}  // namespace probsafe::rl
