#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include <Eigen/Core>

#include "probsafe/evasion/task_config.hpp"
#include "probsafe/evasion/types.hpp"
#include "probsafe/stl/monitor.hpp"

namespace probsafe::evasion {

/// Layout of one episode-trace row. Row k holds the joint state at step k
/// and the control applied from it (at the final row: the control the
/// controller issues there, which is not executed).
namespace col {
inline constexpr std::size_t kRobotX = 0;
inline constexpr std::size_t kRobotY = 1;
inline constexpr std::size_t kRobotTheta = 2;
inline constexpr std::size_t kRobotV = 3;
inline constexpr std::size_t kObstacleX = 4;
inline constexpr std::size_t kObstacleY = 5;
inline constexpr std::size_t kObstacleTheta = 6;
inline constexpr std::size_t kObstacleV = 7;
inline constexpr std::size_t kAppliedV = 8;
inline constexpr std::size_t kAppliedOmega = 9;  ///< commanded turn rate, theta_dot_r
inline constexpr std::size_t kSafeV = 10;
inline constexpr std::size_t kSafeOmega = 11;
inline constexpr std::size_t kSign = 12;
inline constexpr std::size_t kDeltaTheta = 13;
inline constexpr std::size_t kEncounter = 14;
inline constexpr std::size_t kCount = 15;
}  // namespace col

/// The global safety formula over the predicates `infront`, `near`
/// (mindistance <= danger radius) and `evade`.
inline constexpr std::string_view kSafetyFormula = "G((infront & near) => evade)";

RobotState robot_from_row(std::span<const double> row);
ObstacleState obstacle_from_row(std::span<const double> row);

stl::PredicateTable make_predicate_table(const TaskConfig& cfg);

/// max(1 - |r_K - goal| / |r_0 - goal|, 0) + (1 - K / K_max).
double perform(const Eigen::Vector2d& r_final, const Eigen::Vector2d& r_initial, const Eigen::Vector2d& goal,
               int steps, int max_steps);

/// Compiled safety monitor for one task configuration.
class SafetySpecification {
 public:
  explicit SafetySpecification(const TaskConfig& cfg);

  const stl::Monitor& monitor() const noexcept { return monitor_; }
  bool satisfied(const stl::Signal& trace) const;

  /// -1 if the safety formula is violated, otherwise the performance term
  /// evaluated once for the whole episode. Throws std::invalid_argument on
  /// an empty trace.
  double episode_robustness(const stl::Signal& trace) const;

 private:
  TaskConfig cfg_;
  stl::Monitor monitor_;
};

double episode_robustness(const stl::Signal& trace, const TaskConfig& cfg);

}  // namespace probsafe::evasion
