#pragma once

#include <cstdint>
#include <stdexcept>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "probsafe/rl/policy.hpp"
#include "probsafe/rl/rollout_buffer.hpp"
#include "probsafe/util/random.hpp"

namespace probsafe::rl {

struct PpoConfig {
  double learning_rate = 3e-4;
  int n_steps = 2048;
  int batch_size = 64;
  int n_epochs = 10;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_range = 0.2;
  double ent_coef = 0.01;
  double vf_coef = 0.05;
  double max_grad_norm = 0.5;
  bool normalize_advantage = true;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-5;

  void validate() const;
};

void to_json(nlohmann::json& j, const PpoConfig& cfg);
void from_json(const nlohmann::json& j, PpoConfig& cfg);

/// Columns are samples.
struct Minibatch {
  Eigen::MatrixXd obs;         ///< obs_dim x B
  Eigen::MatrixXd pre_squash;  ///< act_dim x B
  Eigen::VectorXd old_log_prob;
  Eigen::VectorXd advantages;  ///< already normalised if requested
  Eigen::VectorXd returns;

  Eigen::Index size() const { return obs.cols(); }
};

struct LossTerms {
  double total = 0.0;
  double policy = 0.0;   ///< -mean(min(r A, clip(r) A))
  double value = 0.0;    ///< mean((R - V)^2), before vf_coef
  double entropy = 0.0;  ///< -mean(entropy), before ent_coef
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

/// total = policy + ent_coef * entropy + vf_coef * value. When `grad` is
/// non-null it receives dtotal/dparams (overwritten).
LossTerms ppo_loss(const PolicyParams& params, const Minibatch& batch, const PpoConfig& cfg, PolicyParams* grad);

class Adam {
 public:
  Adam(std::size_t size, double beta1, double beta2, double eps);

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr);
  std::int64_t steps() const noexcept { return t_; }

 private:
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  double beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
};

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy_loss = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  double grad_norm = 0.0;  ///< mean pre-clipping norm
  int minibatches = 0;
};

class TrainingDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `n_epochs` passes of shuffled minibatch Adam steps with global
/// gradient-norm clipping. The buffer must hold advantages. log_std is
/// clamped to [log_std_min, log_std_max] after every step.
UpdateStats ppo_update(PolicyParams& params, const RolloutBuffer& buffer, const PpoConfig& cfg, const PolicyArch& arch,
                       Adam& optimizer, util::Rng& rng);

}  // namespace probsafe::rl
