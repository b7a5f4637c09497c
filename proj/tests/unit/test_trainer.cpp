#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "probsafe/control/safe_controller.hpp"
#include "probsafe/rl/action_mask.hpp"
#include "probsafe/rl/trainer.hpp"
#include "probsafe/util/random.hpp"

using namespace probsafe;
using namespace probsafe::rl;

namespace {

const verify::IntervalBox kBox({-0.002, -0.01}, {0.002, 0.01});

TrainingConfig tiny_config() {
  TrainingConfig cfg;
  cfg.arch.hidden = {16, 16};
  cfg.ppo.n_steps = 128;
  cfg.ppo.batch_size = 32;
  cfg.ppo.n_epochs = 2;
  cfg.total_steps = 200;
  cfg.calibration_episodes = 1;
  cfg.eval_episodes = 3;
  return cfg;
}

/// Policy whose deterministic raw action is the given corner.
PolicyParams corner_policy(const PolicyArch& arch, double a, double b) {
  PolicyParams p = PolicyParams::zeros(arch);
  p.policy.layers().back().bias << 40.0 * a, 40.0 * b;
  return p;
}

}  // namespace

TEST(Trainer, SmallRunIsDeterministic) {
  const evasion::TaskConfig task;
  const control::SafeController safe(task);
  const ActionMask mask(kBox);
  const TrainingConfig cfg = tiny_config();
  const TrainingResult a = train(task, safe, mask, cfg, 7);
  const TrainingResult b = train(task, safe, mask, cfg, 7);
  EXPECT_EQ(a.params.flatten(), b.params.flatten());
  EXPECT_EQ(training_log_csv(a.log), training_log_csv(b.log));
  EXPECT_EQ(a.r_diff, b.r_diff);

  const TrainingResult c = train(task, safe, mask, cfg, 8);
  EXPECT_NE(a.params.flatten(), c.params.flatten());
}

TEST(Trainer, BookkeepingAndLog) {
  const evasion::TaskConfig task;
  const control::SafeController safe(task);
  const ActionMask mask(kBox);
  const TrainingConfig cfg = tiny_config();
  const TrainingResult r = train(task, safe, mask, cfg, 3);
  EXPECT_EQ(r.steps, 256);
  EXPECT_EQ(r.containment_checks, r.steps);
  ASSERT_EQ(r.log.size(), 2u);
  EXPECT_EQ(r.log[0].step, 128);
  EXPECT_EQ(r.log[1].step, 256);
  for (const auto& row : r.log) {
    EXPECT_GE(row.action_diff, 0.0);
    EXPECT_LE(row.action_diff, 1.0);
    EXPECT_GE(row.clip_fraction, 0.0);
    EXPECT_LE(row.clip_fraction, 1.0);
    EXPECT_TRUE(std::isfinite(row.policy_loss));
    EXPECT_TRUE(std::isfinite(row.value_loss));
  }
  EXPECT_GT(r.r_diff, 0.0);
  EXPECT_TRUE(r.params.all_finite());

  const std::string csv = training_log_csv(r.log);
  EXPECT_EQ(csv.rfind("step,episodes,mean_reward,std_reward,action_diff,policy_loss,value_loss,entropy_loss,"
                      "approx_kl,clip_fraction\n",
                      0),
            0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Trainer, FixedRewardScaleIsKept) {
  evasion::TaskConfig task;
  task.auto_calibrate_reward = false;
  task.r_diff = 123.0;
  const control::SafeController safe(task);
  const TrainingResult r = train(task, safe, ActionMask(kBox), tiny_config(), 1);
  EXPECT_DOUBLE_EQ(r.r_diff, 123.0);
}

TEST(Trainer, CalibrationHitsTargetReturn) {
  evasion::TaskConfig task;
  const control::SafeController safe(task);
  const ActionMask mask(kBox);
  const std::uint64_t seed = 21;
  const int episodes = 3;
  task.r_diff = calibrate_reward_scale(task, safe, mask, episodes, util::derive_seed(seed, 1));
  EXPECT_GT(task.r_diff, 0.0);

  const PolicyArch arch;
  double largest = 0.0;
  for (const auto& [a, b] : {std::pair{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}}) {
    const EvaluationResult e = evaluate_policy(corner_policy(arch, a, b), task, safe, mask, episodes, seed);
    largest = std::max(largest, std::abs(e.mean_return));
    EXPECT_GT(e.mean_action_diff, 0.9);
    EXPECT_LE(e.mean_action_diff, 1.0);
  }
  EXPECT_NEAR(largest, task.target_episode_return, 1e-9);
}

TEST(Trainer, SafeActionEvaluatesToZero) {
  const evasion::TaskConfig task;
  const control::SafeController safe(task);
  const ActionMask mask(kBox);
  const EvaluationResult e = evaluate_policy(PolicyParams::zeros(PolicyArch{}), task, safe, mask, 4, 2);
  ASSERT_EQ(e.returns.size(), 4u);
  for (const double r : e.returns) EXPECT_DOUBLE_EQ(r, 0.0);
  EXPECT_DOUBLE_EQ(e.mean_action_diff, 0.0);
  EXPECT_GT(e.containment_checks, 0);

  util::Rng init(2);
  const PolicyParams fresh = PolicyParams::initialize(PolicyArch{}, init);
  const EvaluationResult f = evaluate_policy(fresh, task, safe, mask, 4, 2);
  EXPECT_LT(std::abs(f.mean_return), 0.05 * task.target_episode_return);
  const EvaluationResult s1 = evaluate_policy(fresh, task, safe, mask, 2, 2, false);
  const EvaluationResult s2 = evaluate_policy(fresh, task, safe, mask, 2, 2, false);
  EXPECT_EQ(s1.returns, s2.returns);
}

TEST(TrainingConfig, JsonRoundTripAndValidation) {
  TrainingConfig cfg = tiny_config();
  const nlohmann::json j = cfg;
  const TrainingConfig back = j.get<TrainingConfig>();
  EXPECT_EQ(nlohmann::json(back), j);
  EXPECT_EQ(back.arch.hidden, (std::vector<int>{16, 16}));
  EXPECT_EQ(back.total_steps, 200);

  TrainingConfig bad = cfg;
  bad.total_steps = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.arch.obs_dim = 5;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_THROW(evaluate_policy(PolicyParams::zeros(PolicyArch{}), evasion::TaskConfig{},
                               control::SafeController(evasion::TaskConfig{}), ActionMask(kBox), 0, 1),
               std::invalid_argument);
}
