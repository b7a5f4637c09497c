#pragma once

#include <memory>

#include "probsafe/evasion/controller.hpp"
#include "probsafe/evasion/task_config.hpp"
#include "probsafe/rl/action_mask.hpp"
#include "probsafe/rl/policy.hpp"

namespace probsafe::rl {

/// Deterministic extracted policy: mask(tanh(mean(obs)), safe(x)).
class LearnedPolicyController final : public evasion::Controller {
 public:
  LearnedPolicyController(PolicyParams params, evasion::TaskConfig task, std::shared_ptr<const evasion::Controller> safe,
                          ActionMask mask);

  evasion::Control operator()(const evasion::JointState& state) const override;

  const PolicyParams& params() const noexcept { return params_; }
  const ActionMask& mask() const noexcept { return mask_; }

 private:
  PolicyParams params_;
  evasion::TaskConfig task_;
  std::shared_ptr<const evasion::Controller> safe_;
  ActionMask mask_;
};

}  // namespace probsafe::rl
