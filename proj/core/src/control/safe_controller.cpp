#include "probsafe/control/safe_controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "probsafe/evasion/dynamics.hpp"
#include "probsafe/evasion/geometry.hpp"
#include "probsafe/evasion/predicates.hpp"

namespace probsafe::control {

using evasion::Control;
using evasion::JointState;

void SafeControllerConfig::validate(const evasion::TaskConfig& task) const {
  if (!(cruise_speed >= task.limits.v_min && cruise_speed <= task.limits.v_max)) {
    throw std::invalid_argument("cruise_speed outside the actuator limits");
  }
  if (!(evade_turn_rate > task.evade_rate_tol && evade_turn_rate <= task.evade_max_rate &&
        evade_turn_rate <= task.limits.omega_max)) {
    throw std::invalid_argument("evade_turn_rate must lie in (evade_rate_tol, min(evade_max_rate, omega_max)]");
  }
  if (!(heading_gain > 0.0 && path_lookahead > 0.0 && waypoint_distance > 0.0)) {
    throw std::invalid_argument("controller gains and distances must be > 0");
  }
}

void to_json(nlohmann::json& j, const SafeControllerConfig& c) {
  j = nlohmann::json{{"cruise_speed", c.cruise_speed},
                     {"heading_gain", c.heading_gain},
                     {"evade_turn_rate", c.evade_turn_rate},
                     {"path_lookahead", c.path_lookahead},
                     {"waypoint_distance", c.waypoint_distance}};
}

void from_json(const nlohmann::json& j, SafeControllerConfig& c) {
  c.cruise_speed = j.value("cruise_speed", c.cruise_speed);
  c.heading_gain = j.value("heading_gain", c.heading_gain);
  c.evade_turn_rate = j.value("evade_turn_rate", c.evade_turn_rate);
  c.path_lookahead = j.value("path_lookahead", c.path_lookahead);
  c.waypoint_distance = j.value("waypoint_distance", c.waypoint_distance);
}

SafeController::SafeController(evasion::TaskConfig task, SafeControllerConfig cfg)
    : task_(std::move(task)), cfg_(cfg) {
  task_.validate();
  cfg_.validate(task_);
}

Control SafeController::operator()(const JointState& state) const { return command(state).control; }

Command SafeController::command(const JointState& state) const {
  const auto& robot = state.robot;
  const Eigen::Vector2d p = robot.position();
  Command out;

  if (state.encounter.active) {
    const int sign = state.encounter.sign;
    const double reference = evasion::optimal_heading(task_.start, task_.goal) + sign * (evasion::kPi / 2.0);
    out.waypoint = p + cfg_.waypoint_distance * evasion::a2v(reference);
    const double gap = evasion::delta_theta(robot.theta, sign, task_.start, task_.goal);
    const bool settled = gap >= 0.0 || std::abs(gap) <= task_.evade_angle_tol;
    out.mode = settled ? Mode::kEvadeHold : Mode::kEvadeTurn;
    out.control = {cfg_.cruise_speed, settled ? 0.0 : sign * cfg_.evade_turn_rate};
    out.control = evasion::clamp_control(out.control, task_.limits);
    return out;
  }

  const Eigen::Vector2d path = task_.goal - task_.start;
  const Eigen::Vector2d closest = evasion::closest_point_on_segment(p, task_.start, task_.goal);
  const double remaining = (task_.goal - closest).norm();
  out.waypoint = remaining <= cfg_.path_lookahead ? task_.goal
                                                  : Eigen::Vector2d(closest + cfg_.path_lookahead * path.normalized());
  const Eigen::Vector2d to_waypoint = out.waypoint - p;
  const double desired = std::atan2(to_waypoint.y(), to_waypoint.x());
  const double error = evasion::wrap_angle(desired - robot.theta);
  out.mode = Mode::kTrack;
  out.control = evasion::clamp_control({cfg_.cruise_speed, cfg_.heading_gain * error}, task_.limits);
  return out;
}

}  // namespace probsafe::control
