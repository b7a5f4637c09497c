#include "probsafe/evasion/task_config.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace probsafe::evasion {

void TaskConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("task config: ") + what);
  };
  require(dt > 0.0, "dt must be > 0");
  require(horizon >= 1, "horizon must be >= 1");
  require(danger_radius > 0.0, "danger_radius must be > 0");
  require(lookahead >= 0.0, "lookahead must be >= 0");
  require(goal_radius > 0.0, "goal_radius must be > 0");
  require((goal - start).norm() > goal_radius, "start must lie outside the goal radius");
  require(arena.dimension() == 2 && obstacle_region.dimension() == 2, "regions must be 2-D boxes");
  require(limits.v_min <= limits.v_max && limits.omega_max >= 0.0, "actuator limits are inconsistent");
  require(evade_max_rate > 0.0 && evade_angle_tol >= 0.0 && evade_rate_tol >= 0.0,
          "evade thresholds must be non-negative");
  require(encounter_release_margin >= 0.0, "encounter_release_margin must be >= 0");
  require(obstacle_speed_min >= 0.0 && obstacle_speed_min <= obstacle_speed_max, "obstacle speed range");
  require(r_diff > 0.0 && target_episode_return > 0.0, "reward scales must be > 0");
}

namespace {

nlohmann::json vec2(const Eigen::Vector2d& v) { return nlohmann::json::array({v.x(), v.y()}); }

Eigen::Vector2d read_vec2(const nlohmann::json& j) {
  const auto a = j.get<std::vector<double>>();
  if (a.size() != 2) throw std::invalid_argument("expected a 2-element position");
  return {a[0], a[1]};
}

}  // namespace

void to_json(nlohmann::json& j, const TaskConfig& c) {
  j = nlohmann::json{
      {"dt", c.dt},
      {"horizon", c.horizon},
      {"danger_radius", c.danger_radius},
      {"lookahead", c.lookahead},
      {"start", vec2(c.start)},
      {"goal", vec2(c.goal)},
      {"goal_radius", c.goal_radius},
      {"initial_robot_speed", c.initial_robot_speed},
      {"arena", c.arena},
      {"v_min", c.limits.v_min},
      {"v_max", c.limits.v_max},
      {"omega_max", c.limits.omega_max},
      {"evade_max_rate", c.evade_max_rate},
      {"evade_angle_tol", c.evade_angle_tol},
      {"evade_rate_tol", c.evade_rate_tol},
      {"encounter_release_margin", c.encounter_release_margin},
      {"obstacle_region", c.obstacle_region},
      {"obstacle_speed_min", c.obstacle_speed_min},
      {"obstacle_speed_max", c.obstacle_speed_max},
      {"r_diff", c.r_diff},
      {"auto_calibrate_reward", c.auto_calibrate_reward},
      {"target_episode_return", c.target_episode_return},
  };
}

void from_json(const nlohmann::json& j, TaskConfig& c) {
  c.dt = j.value("dt", c.dt);
  c.horizon = j.value("horizon", c.horizon);
  c.danger_radius = j.value("danger_radius", c.danger_radius);
  c.lookahead = j.value("lookahead", c.lookahead);
  if (j.contains("start")) c.start = read_vec2(j.at("start"));
  if (j.contains("goal")) c.goal = read_vec2(j.at("goal"));
  c.goal_radius = j.value("goal_radius", c.goal_radius);
  c.initial_robot_speed = j.value("initial_robot_speed", c.initial_robot_speed);
  if (j.contains("arena")) c.arena = j.at("arena").get<verify::IntervalBox>();
  c.limits.v_min = j.value("v_min", c.limits.v_min);
  c.limits.v_max = j.value("v_max", c.limits.v_max);
  c.limits.omega_max = j.value("omega_max", c.limits.omega_max);
  c.evade_max_rate = j.value("evade_max_rate", c.evade_max_rate);
  c.evade_angle_tol = j.value("evade_angle_tol", c.evade_angle_tol);
  c.evade_rate_tol = j.value("evade_rate_tol", c.evade_rate_tol);
  c.encounter_release_margin = j.value("encounter_release_margin", c.encounter_release_margin);
  if (j.contains("obstacle_region")) c.obstacle_region = j.at("obstacle_region").get<verify::IntervalBox>();
  c.obstacle_speed_min = j.value("obstacle_speed_min", c.obstacle_speed_min);
  c.obstacle_speed_max = j.value("obstacle_speed_max", c.obstacle_speed_max);
  c.r_diff = j.value("r_diff", c.r_diff);
  c.auto_calibrate_reward = j.value("auto_calibrate_reward", c.auto_calibrate_reward);
  c.target_episode_return = j.value("target_episode_return", c.target_episode_return);
  c.validate();
}

}  // namespace probsafe::evasion
