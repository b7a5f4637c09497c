#pragma once

#include <stdexcept>

#include <Eigen/Core>

#include "probsafe/evasion/types.hpp"
#include "probsafe/verify/interval_box.hpp"

namespace probsafe::rl {

/// The admissible action set u(x) + E around a safe control.
class ActionMask {
 public:
  /// Throws std::invalid_argument unless `expansion` is 2-D and contains 0.
  explicit ActionMask(verify::IntervalBox expansion);

  const verify::IntervalBox& expansion() const noexcept { return expansion_; }

  /// Affine map of raw (clipped to [-1, 1]) onto safe + E.
  evasion::Control apply(const Eigen::Vector2d& raw, const evasion::Control& safe) const;
  bool contains(const evasion::Control& applied, const evasion::Control& safe) const;
  /// |(applied - safe) / max(|lower|, |upper|)| / sqrt(2); 0 at the safe
  /// action, 1 at a corner of a symmetric box. Degenerate axes count 0.
  double normalized_difference(const evasion::Control& applied, const evasion::Control& safe) const;

 private:
  verify::IntervalBox expansion_;
};

evasion::Control mask_action(const Eigen::Vector2d& raw, const evasion::Control& safe, const ActionMask& mask);

class ContainmentViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace probsafe::rl
