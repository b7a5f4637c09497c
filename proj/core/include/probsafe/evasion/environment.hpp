#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "probsafe/evasion/task_config.hpp"
#include "probsafe/evasion/types.hpp"
#include "probsafe/stl/signal.hpp"
#include "probsafe/util/random.hpp"

namespace probsafe::evasion {

enum class Termination { kRunning, kGoal, kHorizon };
const char* to_string(Termination t);

struct EpisodeTrace {
  stl::Signal signal;
  Termination termination = Termination::kRunning;

  int steps() const { return static_cast<int>(signal.size()) - 1; }
};

/// Opens an encounter when the obstacle is in front and projected within the
/// danger radius, classifies and latches its sign, and closes it once the
/// obstacle is behind or beyond the release threshold.
void update_encounter(JointState& state, const TaskConfig& cfg);

using Observation = std::array<double, 7>;

/// [goal - p (2), closest path point - p (2), wrap(optimal heading - theta) (1), obstacle - p (2)]
Observation observe(const JointState& state, const TaskConfig& cfg);

/// r_diff * (|goal - p_safe| - |goal - p_action|) where both positions are
/// one step from `prev` under the respective (clamped) controls.
double reward(const JointState& prev, const Control& action, const Control& safe, const TaskConfig& cfg);

/// Robot + one obstacle. A single instance is not thread-safe.
class EvasionEnv {
 public:
  explicit EvasionEnv(TaskConfig cfg);

  const TaskConfig& config() const noexcept { return cfg_; }

  /// Obstacle [x, y, theta, v].
  static std::vector<std::string> initial_condition_names();
  /// Rejection-samples until the initial distance exceeds the danger radius.
  std::vector<double> sample_initial_condition(util::Rng& rng) const;

  void reset(std::span<const double> initial_condition);

  const JointState& state() const noexcept { return state_; }
  Termination termination() const noexcept { return termination_; }
  bool done() const noexcept { return termination_ != Termination::kRunning; }

  /// Clamps `applied` to the actuator limits, records the current row and
  /// advances one step. Returns the executed control.
  Control step(const Control& applied, const Control& safe);
  /// Records the final row; call exactly once after done().
  void close(const Control& applied, const Control& safe);

  const stl::Signal& trace() const noexcept { return trace_; }
  EpisodeTrace take_trace();

 private:
  void record(const Control& applied, const Control& safe);

  TaskConfig cfg_;
  JointState state_;
  Termination termination_ = Termination::kRunning;
  bool closed_ = false;
  stl::Signal trace_;
};

}  // namespace probsafe::evasion
