#include "probsafe/evasion/environment.hpp"

#include <stdexcept>

#include "probsafe/evasion/dynamics.hpp"
#include "probsafe/evasion/geometry.hpp"
#include "probsafe/evasion/predicates.hpp"
#include "probsafe/evasion/specification.hpp"

namespace probsafe::evasion {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kRunning: return "running";
    case Termination::kGoal: return "goal";
    case Termination::kHorizon: return "horizon";
  }
  return "unknown";
}

void update_encounter(JointState& state, const TaskConfig& cfg) {
  const bool front = infront(state.robot, state.obstacle);
  const double gap = mindistance(state.robot, state.obstacle, cfg.dt, cfg.lookahead);
  Encounter& e = state.encounter;
  if (e.active && (!front || gap > cfg.danger_radius + cfg.encounter_release_margin)) {
    e = Encounter{};
  }
  if (!e.active && front && gap <= cfg.danger_radius) {
    e.active = true;
    e.sign = evade_sign(state.robot, state.obstacle);
  }
}

Observation observe(const JointState& state, const TaskConfig& cfg) {
  const Eigen::Vector2d p = state.robot.position();
  const Eigen::Vector2d to_goal = cfg.goal - p;
  const Eigen::Vector2d to_path = closest_point_on_segment(p, cfg.start, cfg.goal) - p;
  const double heading_error = wrap_angle(optimal_heading(cfg.start, cfg.goal) - state.robot.theta);
  const Eigen::Vector2d to_obstacle = state.obstacle.position() - p;
  return {to_goal.x(), to_goal.y(), to_path.x(), to_path.y(), heading_error, to_obstacle.x(), to_obstacle.y()};
}

double reward(const JointState& prev, const Control& action, const Control& safe, const TaskConfig& cfg) {
  const RobotState with_action = step(prev.robot, clamp_control(action, cfg.limits), cfg.dt);
  const RobotState with_safe = step(prev.robot, clamp_control(safe, cfg.limits), cfg.dt);
  return cfg.r_diff * ((cfg.goal - with_safe.position()).norm() - (cfg.goal - with_action.position()).norm());
}

EvasionEnv::EvasionEnv(TaskConfig cfg) : cfg_(std::move(cfg)), trace_(col::kCount, cfg_.dt) {
  cfg_.validate();
}

std::vector<std::string> EvasionEnv::initial_condition_names() {
  return {"obstacle_x", "obstacle_y", "obstacle_theta", "obstacle_v"};
}

std::vector<double> EvasionEnv::sample_initial_condition(util::Rng& rng) const {
  const auto& region = cfg_.obstacle_region;
  const auto& arena = cfg_.arena;
  const double x_lo = std::max(region.lower()[0], arena.lower()[0]);
  const double x_hi = std::min(region.upper()[0], arena.upper()[0]);
  const double y_lo = std::max(region.lower()[1], arena.lower()[1]);
  const double y_hi = std::min(region.upper()[1], arena.upper()[1]);
  if (x_lo > x_hi || y_lo > y_hi) throw std::invalid_argument("obstacle region lies outside the arena");
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double x = rng.uniform(x_lo, x_hi);
    const double y = rng.uniform(y_lo, y_hi);
    const double theta = wrap_angle(rng.uniform(-kPi, kPi));
    const double v = rng.uniform(cfg_.obstacle_speed_min, cfg_.obstacle_speed_max);
    if ((Eigen::Vector2d(x, y) - cfg_.start).norm() > cfg_.danger_radius) return {x, y, theta, v};
  }
  throw std::runtime_error("could not sample an obstacle outside the danger radius");
}

void EvasionEnv::reset(std::span<const double> ic) {
  if (ic.size() != 4) throw std::invalid_argument("obstacle initial condition needs 4 components");
  state_ = JointState{};
  state_.robot.x = cfg_.start.x();
  state_.robot.y = cfg_.start.y();
  state_.robot.theta = wrap_angle(optimal_heading(cfg_.start, cfg_.goal));
  state_.robot.v = cfg_.initial_robot_speed;
  state_.obstacle.x = ic[0];
  state_.obstacle.y = ic[1];
  state_.obstacle.theta = wrap_angle(ic[2]);
  state_.obstacle.v = ic[3];
  if (!state_.obstacle.finite()) throw std::domain_error("non-finite obstacle initial condition");
  update_encounter(state_, cfg_);
  termination_ = Termination::kRunning;
  closed_ = false;
  trace_ = stl::Signal(col::kCount, cfg_.dt);
}

void EvasionEnv::record(const Control& applied, const Control& safe) {
  const JointState& s = state_;
  const int sign = s.encounter.active ? s.encounter.sign : 0;
  const double gap = sign == 0 ? 0.0 : delta_theta(s.robot.theta, sign, cfg_.start, cfg_.goal);
  const std::array<double, col::kCount> row{
      s.robot.x, s.robot.y, s.robot.theta, s.robot.v,
      s.obstacle.x, s.obstacle.y, s.obstacle.theta, s.obstacle.v,
      applied.v, applied.omega, safe.v, safe.omega,
      static_cast<double>(sign), gap, s.encounter.active ? 1.0 : 0.0};
  trace_.push_back(row);
}

Control EvasionEnv::step(const Control& applied, const Control& safe) {
  if (done()) throw std::logic_error("step() on a finished episode");
  const Control executed = clamp_control(applied, cfg_.limits);
  record(executed, safe);
  state_.robot = evasion::step(state_.robot, executed, cfg_.dt);
  state_.obstacle = advance(state_.obstacle, cfg_.dt);
  ++state_.step;
  update_encounter(state_, cfg_);
  if ((state_.robot.position() - cfg_.goal).norm() <= cfg_.goal_radius) {
    termination_ = Termination::kGoal;
  } else if (state_.step >= cfg_.horizon) {
    termination_ = Termination::kHorizon;
  }
  return executed;
}

void EvasionEnv::close(const Control& applied, const Control& safe) {
  if (!done()) throw std::logic_error("close() before the episode finished");
  if (closed_) throw std::logic_error("episode already closed");
  record(clamp_control(applied, cfg_.limits), safe);
  closed_ = true;
}

EpisodeTrace EvasionEnv::take_trace() {
  if (!closed_) throw std::logic_error("take_trace() before close()");
  EpisodeTrace out{std::move(trace_), termination_};
  trace_ = stl::Signal(col::kCount, cfg_.dt);
  closed_ = false;
  return out;
}

}  // namespace probsafe::evasion
