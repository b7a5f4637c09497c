#include "probsafe/evasion/rollout.hpp"

#include <sstream>
#include <stdexcept>

#include "probsafe/evasion/predicates.hpp"
#include "probsafe/util/io.hpp"

namespace probsafe::evasion {

namespace {

Control perturbed(Control u, const verify::IntervalBox* perturbation, util::Rng& rng) {
  if (perturbation) {
    const std::vector<double> xi = perturbation->sample(rng);
    u.v += xi[0];
    u.omega += xi[1];
  }
  return u;
}

}  // namespace

EpisodeTrace run_episode(const TaskConfig& cfg, const Controller& controller, const Controller& safe,
                         std::span<const double> initial_condition, const verify::IntervalBox* perturbation,
                         util::Rng& rng) {
  if (perturbation && perturbation->dimension() != 2) throw std::invalid_argument("perturbation must be 2-D");
  EvasionEnv env(cfg);
  env.reset(initial_condition);
  const bool same = &controller == &safe;
  auto controls = [&](const JointState& s) {
    const Control safe_u = safe(s);
    const Control u = same ? safe_u : controller(s);
    return std::pair{perturbed(u, perturbation, rng), safe_u};
  };
  while (!env.done()) {
    const auto [u, safe_u] = controls(env.state());
    env.step(u, safe_u);
  }
  const auto [u, safe_u] = controls(env.state());
  env.close(u, safe_u);
  return env.take_trace();
}

EvasionRolloutSource::EvasionRolloutSource(TaskConfig cfg, std::shared_ptr<const Controller> controller,
                                           std::shared_ptr<const Controller> safe)
    : env_(std::move(cfg)), controller_(std::move(controller)), safe_(std::move(safe)) {
  if (!controller_ || !safe_) throw std::invalid_argument("rollout source needs both controllers");
}

std::vector<std::string> EvasionRolloutSource::initial_condition_names() const {
  return EvasionEnv::initial_condition_names();
}

std::vector<double> EvasionRolloutSource::sample_initial_condition(util::Rng& rng) const {
  return env_.sample_initial_condition(rng);
}

stl::Signal EvasionRolloutSource::rollout(const std::vector<double>& initial_condition,
                                          const verify::IntervalBox* expansion, util::Rng& rng) const {
  return run_episode(env_.config(), *controller_, *safe_, initial_condition, expansion, rng).signal;
}

verify::RobustnessFn make_robustness_fn(const TaskConfig& cfg) {
  auto spec = std::make_shared<const SafetySpecification>(cfg);
  return [spec](const stl::Signal& trace) { return spec->episode_robustness(trace); };
}

std::string trace_csv(const EpisodeTrace& trace, const TaskConfig& cfg) {
  std::ostringstream out;
  out << "k,x_r,y_r,theta_r,v_r,x_o,y_o,theta_o,v_o,u_v,u_omega,safe_v,safe_omega,"
         "encounter,sign,delta_theta,infront,mindistance,antecedent,evade\n";
  const stl::Signal& s = trace.signal;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto row = s.state(k);
    const RobotState r = robot_from_row(row);
    const ObstacleState o = obstacle_from_row(row);
    const bool front = infront(r, o);
    const double gap = mindistance(r, o, cfg.dt, cfg.lookahead);
    const int sign = static_cast<int>(row[col::kSign]);
    const bool antecedent = front && gap <= cfg.danger_radius;
    const bool evading = sign != 0 && evade(row[col::kAppliedOmega], row[col::kDeltaTheta], sign, cfg);
    out << k;
    for (std::size_t c = 0; c < col::kSign; ++c) out << ',' << util::format_double(row[c]);
    out << ',' << static_cast<int>(row[col::kEncounter]) << ',' << sign << ','
        << util::format_double(row[col::kDeltaTheta]) << ',' << (front ? 1 : 0) << ','
        << util::format_double(gap) << ',' << (antecedent ? 1 : 0) << ',' << (evading ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace probsafe::evasion
