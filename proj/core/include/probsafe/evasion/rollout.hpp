#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "probsafe/evasion/controller.hpp"
#include "probsafe/evasion/environment.hpp"
#include "probsafe/evasion/specification.hpp"
#include "probsafe/verify/scenario.hpp"

namespace probsafe::evasion {

/// Runs one episode. The executed control is controller(x) plus, when
/// `perturbation` is given, a fresh uniform draw from it at every step;
/// `safe` is recorded alongside. Pass the same object twice to run the
/// safe controller itself.
EpisodeTrace run_episode(const TaskConfig& cfg, const Controller& controller, const Controller& safe,
                         std::span<const double> initial_condition, const verify::IntervalBox* perturbation,
                         util::Rng& rng);

/// The evasion closed loop as a verification source.
class EvasionRolloutSource final : public verify::RolloutSource {
 public:
  EvasionRolloutSource(TaskConfig cfg, std::shared_ptr<const Controller> controller,
                       std::shared_ptr<const Controller> safe);

  std::vector<std::string> initial_condition_names() const override;
  std::vector<double> sample_initial_condition(util::Rng& rng) const override;
  stl::Signal rollout(const std::vector<double>& initial_condition, const verify::IntervalBox* expansion,
                      util::Rng& rng) const override;

  const TaskConfig& config() const noexcept { return env_.config(); }

 private:
  EvasionEnv env_;  // used only for const sampling
  std::shared_ptr<const Controller> controller_;
  std::shared_ptr<const Controller> safe_;
};

/// Episode robustness as a verification robustness function.
verify::RobustnessFn make_robustness_fn(const TaskConfig& cfg);

/// One row per step: k, robot, obstacle, applied and safe control, evade
/// bookkeeping and the predicate values the monitor sees.
std::string trace_csv(const EpisodeTrace& trace, const TaskConfig& cfg);

}  // namespace probsafe::evasion
