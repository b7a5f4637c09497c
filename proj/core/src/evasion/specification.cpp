#include "probsafe/evasion/specification.hpp"

#include <algorithm>
#include <stdexcept>

#include "probsafe/evasion/geometry.hpp"
#include "probsafe/evasion/predicates.hpp"
#include "probsafe/stl/parser.hpp"

namespace probsafe::evasion {

RobotState robot_from_row(std::span<const double> row) {
  RobotState r;
  r.x = row[col::kRobotX];
  r.y = row[col::kRobotY];
  r.theta = row[col::kRobotTheta];
  r.v = row[col::kRobotV];
  return r;
}

ObstacleState obstacle_from_row(std::span<const double> row) {
  ObstacleState o;
  o.x = row[col::kObstacleX];
  o.y = row[col::kObstacleY];
  o.theta = row[col::kObstacleTheta];
  o.v = row[col::kObstacleV];
  return o;
}

stl::PredicateTable make_predicate_table(const TaskConfig& cfg) {
  stl::PredicateTable table;
  table.add("infront", [](std::span<const double> row) {
    return infront_margin(robot_from_row(row), obstacle_from_row(row));
  });
  table.add("near", [cfg](std::span<const double> row) {
    return cfg.danger_radius - mindistance(robot_from_row(row), obstacle_from_row(row), cfg.dt, cfg.lookahead);
  });
  table.add("evade", [cfg](std::span<const double> row) {
    const int sign = static_cast<int>(row[col::kSign]);
    return evade(row[col::kAppliedOmega], row[col::kDeltaTheta], sign, cfg) ? 1.0 : -1.0;
  });
  return table;
}

double perform(const Eigen::Vector2d& r_final, const Eigen::Vector2d& r_initial, const Eigen::Vector2d& goal,
               int steps, int max_steps) {
  const double initial_gap = (r_initial - goal).norm();
  if (!(initial_gap > 0.0)) throw std::invalid_argument("perform: initial position coincides with the goal");
  if (max_steps < 1) throw std::invalid_argument("perform: max_steps must be >= 1");
  const double progress = std::max(1.0 - (r_final - goal).norm() / initial_gap, 0.0);
  return progress + (1.0 - static_cast<double>(steps) / static_cast<double>(max_steps));
}

SafetySpecification::SafetySpecification(const TaskConfig& cfg)
    : cfg_(cfg), monitor_(stl::parse_formula(kSafetyFormula), make_predicate_table(cfg)) {}

bool SafetySpecification::satisfied(const stl::Signal& trace) const { return monitor_.satisfies(trace, 0); }

double SafetySpecification::episode_robustness(const stl::Signal& trace) const {
  if (trace.empty()) throw std::invalid_argument("episode_robustness on an empty trace");
  if (trace.dimension() != col::kCount) throw std::invalid_argument("trace has the wrong row layout");
  if (!satisfied(trace)) return -1.0;
  const auto first = trace.state(0);
  const auto last = trace.back();
  const Eigen::Vector2d r0(first[col::kRobotX], first[col::kRobotY]);
  const Eigen::Vector2d rk(last[col::kRobotX], last[col::kRobotY]);
  const int steps = static_cast<int>(trace.size()) - 1;
  return perform(rk, r0, cfg_.goal, steps, cfg_.horizon);
}

double episode_robustness(const stl::Signal& trace, const TaskConfig& cfg) {
  return SafetySpecification(cfg).episode_robustness(trace);
}

}  // namespace probsafe::evasion
