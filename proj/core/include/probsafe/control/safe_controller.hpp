#pragma once

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "probsafe/evasion/controller.hpp"
#include "probsafe/evasion/task_config.hpp"

namespace probsafe::control {

struct SafeControllerConfig {
  double cruise_speed = 0.15;     ///< m/s
  double heading_gain = 2.0;      ///< 1/s
  double evade_turn_rate = 1.2;   ///< rad/s, must stay below the evade bound
  double path_lookahead = 0.15;   ///< m, carrot distance along the path
  double waypoint_distance = 0.3; ///< m, evasion waypoint offset

  void validate(const evasion::TaskConfig& task) const;
};

void to_json(nlohmann::json& j, const SafeControllerConfig& cfg);
void from_json(const nlohmann::json& j, SafeControllerConfig& cfg);

enum class Mode { kTrack, kEvadeTurn, kEvadeHold };

struct Command {
  evasion::Control control;
  Mode mode = Mode::kTrack;
  Eigen::Vector2d waypoint = Eigen::Vector2d::Zero();
};

/// Waypoint controller for the evasion task.
///
/// Outside an encounter it tracks a carrot point on the start -> goal
/// segment with a proportional heading law at cruise speed. During an
/// encounter it places a waypoint perpendicular to the path on the side of
/// the encounter sign and turns towards it at evade_turn_rate with that
/// sign; once the perpendicular heading is reached (the evade settle
/// condition holds) it stops turning and drives on.
class SafeController final : public evasion::Controller {
 public:
  SafeController(evasion::TaskConfig task, SafeControllerConfig cfg = {});

  evasion::Control operator()(const evasion::JointState& state) const override;
  Command command(const evasion::JointState& state) const;

  const SafeControllerConfig& config() const noexcept { return cfg_; }

 private:
  evasion::TaskConfig task_;
  SafeControllerConfig cfg_;
};

}  // namespace probsafe::control
