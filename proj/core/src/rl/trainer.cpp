#include "probsafe/rl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <nlohmann/json.hpp>

#include "probsafe/evasion/environment.hpp"
#include "probsafe/rl/rollout_buffer.hpp"
#include "probsafe/util/io.hpp"
#include "probsafe/util/random.hpp"

namespace probsafe::rl {

using evasion::Control;
using evasion::EvasionEnv;
using evasion::TaskConfig;

void TrainingConfig::validate() const {
  ppo.validate();
  arch.validate();
  if (total_steps < 1) throw std::invalid_argument("total_steps must be positive");
  if (calibration_episodes < 1) throw std::invalid_argument("calibration_episodes must be positive");
  if (eval_episodes < 1) throw std::invalid_argument("eval_episodes must be positive");
  if (arch.obs_dim != 7 || arch.act_dim != 2) throw std::invalid_argument("the evasion task needs obs 7, act 2");
}

void to_json(nlohmann::json& j, const TrainingConfig& c) {
  j = {{"ppo", c.ppo},
       {"arch", c.arch},
       {"total_steps", c.total_steps},
       {"calibration_episodes", c.calibration_episodes},
       {"eval_episodes", c.eval_episodes}};
}

void from_json(const nlohmann::json& j, TrainingConfig& c) {
  if (j.contains("ppo")) c.ppo = j.at("ppo").get<PpoConfig>();
  if (j.contains("arch")) c.arch = j.at("arch").get<PolicyArch>();
  c.total_steps = j.value("total_steps", c.total_steps);
  c.calibration_episodes = j.value("calibration_episodes", c.calibration_episodes);
  c.eval_episodes = j.value("eval_episodes", c.eval_episodes);
  c.validate();
}

namespace {

enum Stream : std::uint64_t { kInit = 0, kEpisodes = 1, kActions = 2, kShuffle = 3 };

/// Environment plus safe controller and mask; checks containment of every
/// executed control.
class MaskedEnv {
 public:
  MaskedEnv(const TaskConfig& task, const evasion::Controller& safe, const ActionMask& mask)
      : env_(task), safe_(safe), mask_(mask) {}

  struct StepResult {
    Control executed;
    double reward;
    double action_diff;
    bool done;
  };

  void reset(util::Rng& ic_rng) {
    env_.reset(env_.sample_initial_condition(ic_rng));
    safe_u_ = safe_(env_.state());
  }

  evasion::Observation observation() const { return evasion::observe(env_.state(), env_.config()); }
  const EvasionEnv& env() const { return env_; }

  StepResult step(const Eigen::Vector2d& raw) {
    const Control applied = mask_.apply(raw, safe_u_);
    const double r = evasion::reward(env_.state(), applied, safe_u_, env_.config());
    const Control executed = env_.step(applied, safe_u_);
    ++checks_;
    if (!mask_.contains(executed, safe_u_)) {
      std::ostringstream msg;
      msg << "executed control (" << executed.v << ", " << executed.omega << ") outside safe set around ("
          << safe_u_.v << ", " << safe_u_.omega << ") at step " << env_.state().step;
      throw ContainmentViolation(msg.str());
    }
    const double diff = mask_.normalized_difference(executed, safe_u_);
    const bool done = env_.done();
    if (!done) safe_u_ = safe_(env_.state());
    return {executed, r, diff, done};
  }

  std::int64_t checks() const { return checks_; }

 private:
  EvasionEnv env_;
  const evasion::Controller& safe_;
  const ActionMask& mask_;
  Control safe_u_;
  std::int64_t checks_ = 0;
};

double mean(const std::deque<double>& xs) {
  double s = 0.0;
  for (const double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double population_std(const std::deque<double>& xs) {
  if (xs.empty()) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (const double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

}  // namespace

double calibrate_reward_scale(const TaskConfig& task, const evasion::Controller& safe, const ActionMask& mask,
                              int episodes_per_corner, std::uint64_t seed) {
  if (episodes_per_corner < 1) throw std::invalid_argument("episodes_per_corner must be positive");
  TaskConfig unit = task;
  unit.r_diff = 1.0;
  const Eigen::Vector2d corners[4] = {{1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}};
  double largest = 0.0;
  for (const auto& raw : corners) {
    util::Rng ic_rng(seed);
    MaskedEnv env(unit, safe, mask);
    double total = 0.0;
    for (int e = 0; e < episodes_per_corner; ++e) {
      env.reset(ic_rng);
      for (;;) {
        const auto r = env.step(raw);
        total += r.reward;
        if (r.done) break;
      }
    }
    largest = std::max(largest, std::abs(total / episodes_per_corner));
  }
  if (!(largest > 1e-12)) return task.r_diff;
  return task.target_episode_return / largest;
}

TrainingResult train(const TaskConfig& task_in, const evasion::Controller& safe, const ActionMask& mask,
                     const TrainingConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  TrainingResult result;
  TaskConfig task = task_in;
  if (task.auto_calibrate_reward) {
    task.r_diff = calibrate_reward_scale(task, safe, mask, cfg.calibration_episodes, util::derive_seed(seed, 4));
  }
  result.r_diff = task.r_diff;

  util::Rng init_rng(util::derive_seed(seed, kInit));
  util::Rng ic_rng(util::derive_seed(seed, kEpisodes));
  util::Rng act_rng(util::derive_seed(seed, kActions));
  util::Rng shuffle_rng(util::derive_seed(seed, kShuffle));

  PolicyParams params = PolicyParams::initialize(cfg.arch, init_rng);
  Adam adam(params.size(), cfg.ppo.adam_beta1, cfg.ppo.adam_beta2, cfg.ppo.adam_eps);
  RolloutBuffer buffer(static_cast<std::size_t>(cfg.ppo.n_steps));
  MaskedEnv env(task, safe, mask);
  env.reset(ic_rng);
  evasion::Observation obs = env.observation();

  std::deque<double> recent;
  double episode_return = 0.0;
  const std::int64_t updates = (cfg.total_steps + cfg.ppo.n_steps - 1) / cfg.ppo.n_steps;

  for (std::int64_t u = 0; u < updates; ++u) {
    double diff_sum = 0.0;
    buffer.clear();
    while (!buffer.full()) {
      const ActionSample a = policy_sample(params, obs, act_rng);
      const double v = value_estimate(params, obs);
      const auto r = env.step(a.raw);
      diff_sum += r.action_diff;
      episode_return += r.reward;
      ++result.steps;

      double stored_reward = r.reward;
      if (r.done) {
        if (env.env().termination() == evasion::Termination::kHorizon) {
          // time-limit truncation: bootstrap from the state that was cut off
          stored_reward += cfg.ppo.gamma * value_estimate(params, env.observation());
        }
        ++result.episodes;
        recent.push_back(episode_return);
        if (recent.size() > 100) recent.pop_front();
        episode_return = 0.0;
        env.reset(ic_rng);
      }
      buffer.add({to_vector(obs), a.pre_squash, a.raw, r.executed, a.log_prob, v, stored_reward, r.done});
      obs = env.observation();
    }
    buffer.compute_advantages(value_estimate(params, obs), cfg.ppo.gamma, cfg.ppo.gae_lambda);
    const UpdateStats stats = ppo_update(params, buffer, cfg.ppo, cfg.arch, adam, shuffle_rng);

    TrainingLogRow row;
    row.step = result.steps;
    row.episodes = result.episodes;
    row.mean_reward = mean(recent);
    row.std_reward = population_std(recent);
    row.action_diff = diff_sum / static_cast<double>(buffer.size());
    row.policy_loss = stats.policy_loss;
    row.value_loss = stats.value_loss;
    row.entropy_loss = stats.entropy_loss;
    row.approx_kl = stats.approx_kl;
    row.clip_fraction = stats.clip_fraction;
    result.log.push_back(row);
  }
  result.params = std::move(params);
  result.containment_checks = env.checks();
  return result;
}

EvaluationResult evaluate_policy(const PolicyParams& params, const TaskConfig& task, const evasion::Controller& safe,
                                 const ActionMask& mask, int episodes, std::uint64_t seed, bool deterministic) {
  if (episodes < 1) throw std::invalid_argument("episodes must be positive");
  EvaluationResult out;
  MaskedEnv env(task, safe, mask);
  util::Rng ic_rng(util::derive_seed(seed, kEpisodes));
  util::Rng act_rng(util::derive_seed(seed, kActions));
  for (int e = 0; e < episodes; ++e) {
    env.reset(ic_rng);
    double ret = 0.0, diff = 0.0;
    int steps = 0;
    for (;;) {
      const evasion::Observation obs = env.observation();
      const Eigen::Vector2d raw = deterministic ? Eigen::Vector2d(policy_mean(params, obs))
                                                : Eigen::Vector2d(policy_sample(params, obs, act_rng).raw);
      const auto r = env.step(raw);
      ret += r.reward;
      diff += r.action_diff;
      ++steps;
      if (r.done) break;
    }
    out.returns.push_back(ret);
    out.action_diffs.push_back(diff / steps);
  }
  const std::deque<double> rs(out.returns.begin(), out.returns.end());
  const std::deque<double> ds(out.action_diffs.begin(), out.action_diffs.end());
  out.mean_return = mean(rs);
  out.std_return = population_std(rs);
  out.mean_action_diff = mean(ds);
  out.containment_checks = env.checks();
  return out;
}

std::string training_log_csv(const std::vector<TrainingLogRow>& log) {
  std::string out =
      "step,episodes,mean_reward,std_reward,action_diff,policy_loss,value_loss,entropy_loss,approx_kl,clip_fraction\n";
  for (const auto& r : log) {
    out += std::to_string(r.step) + ',' + std::to_string(r.episodes);
    for (const double v : {r.mean_reward, r.std_reward, r.action_diff, r.policy_loss, r.value_loss, r.entropy_loss,
                           r.approx_kl, r.clip_fraction}) {
      out += ',';
      out += util::format_double(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace probsafe::rl
