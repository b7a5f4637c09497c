#include "probsafe/rl/learned_controller.hpp"

#include <stdexcept>

#include "probsafe/evasion/environment.hpp"

namespace probsafe::rl {

LearnedPolicyController::LearnedPolicyController(PolicyParams params, evasion::TaskConfig task,
                                                 std::shared_ptr<const evasion::Controller> safe, ActionMask mask)
    : params_(std::move(params)), task_(std::move(task)), safe_(std::move(safe)), mask_(std::move(mask)) {
  if (!safe_) throw std::invalid_argument("learned controller needs a safe controller");
  if (params_.obs_dim() != 7 || params_.act_dim() != 2) {
    throw std::invalid_argument("policy shape does not match the evasion task");
  }
}

evasion::Control LearnedPolicyController::operator()(const evasion::JointState& state) const {
  const evasion::Observation obs = evasion::observe(state, task_);
  const Eigen::Vector2d raw = policy_mean(params_, obs);
  return mask_.apply(raw, (*safe_)(state));
}

}  // namespace probsafe::rl
