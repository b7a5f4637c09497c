#pragma once

#include <algorithm>
#include <cmath>

#include "probsafe/rl/policy.hpp"
#include "probsafe/rl/ppo.hpp"
#include "probsafe/util/random.hpp"

namespace oracle {

using probsafe::rl::Minibatch;
using probsafe::rl::PolicyArch;
using probsafe::rl::PolicyParams;
using probsafe::rl::PpoConfig;

/// Orthogonal init plus uniform noise on every parameter.
inline PolicyParams toy_params(const PolicyArch& arch, probsafe::util::Rng& rng) {
  PolicyParams p = PolicyParams::initialize(arch, rng);
  Eigen::VectorXd flat = p.flatten();
  for (Eigen::Index i = 0; i < flat.size(); ++i) flat[i] += rng.uniform(-0.4, 0.4);
  p.assign(flat);
  for (Eigen::Index i = 0; i < p.log_std.size(); ++i) p.log_std[i] = rng.uniform(-0.5, 0.5);
  return p;
}

/// Old log-probs place each ratio well inside or well outside the clip
/// range, so the loss is smooth around `params`.
inline Minibatch toy_batch(const PolicyParams& params, Eigen::Index n, probsafe::util::Rng& rng) {
  const int obs = params.obs_dim();
  const int act = params.act_dim();
  Minibatch b;
  b.obs.resize(obs, n);
  b.pre_squash.resize(act, n);
  b.old_log_prob.resize(n);
  b.advantages.resize(n);
  b.returns.resize(n);
  static constexpr double kShift[4] = {0.05, -0.07, 0.6, -0.6};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (int i = 0; i < obs; ++i) b.obs(i, j) = rng.uniform(-1, 1);
    for (int i = 0; i < act; ++i) b.pre_squash(i, j) = rng.uniform(-1.5, 1.5);
    const Eigen::VectorXd mean = params.policy.forward_one(b.obs.col(j));
    const double logp = probsafe::rl::squashed_log_prob(b.pre_squash.col(j), mean, params.log_std);
    b.old_log_prob[j] = logp - kShift[j % 4];
    b.advantages[j] = rng.uniform(-2, 2);
    b.returns[j] = rng.uniform(-1, 1);
  }
  return b;
}

/// Largest |fd - analytic| / max(floor, |fd| + |analytic|) over all
/// parameters, with central differences of step h on the total loss.
inline double max_gradient_error(const PolicyParams& params, const Minibatch& batch, const PpoConfig& cfg,
                                 double h = 1e-6, double floor = 1e-3) {
  PolicyParams grad = params.zeros_like();
  probsafe::rl::ppo_loss(params, batch, cfg, &grad);
  const Eigen::VectorXd analytic = grad.flatten();
  const Eigen::VectorXd flat = params.flatten();
  PolicyParams probe = params;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    Eigen::VectorXd p = flat;
    p[i] += h;
    probe.assign(p);
    const double up = probsafe::rl::ppo_loss(probe, batch, cfg, nullptr).total;
    p[i] -= 2 * h;
    probe.assign(p);
    const double down = probsafe::rl::ppo_loss(probe, batch, cfg, nullptr).total;
    const double fd = (up - down) / (2 * h);
    worst = std::max(worst, std::abs(fd - analytic[i]) / std::max(floor, std::abs(fd) + std::abs(analytic[i])));
  }
  return worst;
}

}  // namespace oracle
