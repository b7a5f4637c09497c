#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "probsafe/evasion/controller.hpp"
#include "probsafe/evasion/task_config.hpp"
#include "probsafe/rl/action_mask.hpp"
#include "probsafe/rl/policy.hpp"
#include "probsafe/rl/ppo.hpp"

namespace probsafe::rl {

struct TrainingConfig {
  PpoConfig ppo;
  PolicyArch arch;
  std::int64_t total_steps = 100000;  ///< rounded up to whole rollouts
  int calibration_episodes = 4;       ///< per corner action
  int eval_episodes = 50;

  void validate() const;
};

void to_json(nlohmann::json& j, const TrainingConfig& cfg);
void from_json(const nlohmann::json& j, TrainingConfig& cfg);

struct TrainingLogRow {
  std::int64_t step = 0;
  std::int64_t episodes = 0;
  double mean_reward = 0.0;  ///< over the last 100 finished episodes
  double std_reward = 0.0;
  double action_diff = 0.0;  ///< mean normalised difference over the rollout
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy_loss = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

struct TrainingResult {
  PolicyParams params;
  std::vector<TrainingLogRow> log;
  double r_diff = 0.0;
  std::int64_t steps = 0;
  std::int64_t episodes = 0;
  std::int64_t containment_checks = 0;
};

/// Scale that makes the largest mean |return| of the four constant corner
/// actions equal task.target_episode_return. Falls back to task.r_diff when
/// every corner return vanishes.
double calibrate_reward_scale(const evasion::TaskConfig& task, const evasion::Controller& safe, const ActionMask& mask,
                              int episodes_per_corner, std::uint64_t seed);

/// PPO in the masked action space. Throws ContainmentViolation if an
/// executed control leaves safe + E.
TrainingResult train(const evasion::TaskConfig& task, const evasion::Controller& safe, const ActionMask& mask,
                     const TrainingConfig& cfg, std::uint64_t seed);

struct EvaluationResult {
  std::vector<double> returns;
  std::vector<double> action_diffs;  ///< per-episode mean
  double mean_return = 0.0;
  double std_return = 0.0;
  double mean_action_diff = 0.0;
  std::int64_t containment_checks = 0;
};

/// Episodes from seed-derived initial conditions with rewards at
/// task.r_diff. Deterministic uses the squashed mean, otherwise samples.
EvaluationResult evaluate_policy(const PolicyParams& params, const evasion::TaskConfig& task,
                                 const evasion::Controller& safe, const ActionMask& mask, int episodes,
                                 std::uint64_t seed, bool deterministic = true);

std::string training_log_csv(const std::vector<TrainingLogRow>& log);

}  // namespace probsafe::rl
