#include "probsafe/rl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace probsafe::rl {

void PpoConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw std::invalid_argument("learning_rate must be >= 0");
  if (n_steps < 1 || batch_size < 1 || n_epochs < 1) throw std::invalid_argument("PPO sizes must be positive");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in [0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw std::invalid_argument("gae_lambda must lie in [0, 1]");
  if (!(clip_range > 0.0)) throw std::invalid_argument("clip_range must be positive");
  if (!(ent_coef >= 0.0 && vf_coef >= 0.0)) throw std::invalid_argument("loss coefficients must be >= 0");
  if (!(max_grad_norm > 0.0)) throw std::invalid_argument("max_grad_norm must be positive");
  if (!(adam_eps > 0.0)) throw std::invalid_argument("adam_eps must be positive");
}

void to_json(nlohmann::json& j, const PpoConfig& c) {
  j = {{"learning_rate", c.learning_rate}, {"n_steps", c.n_steps},
       {"batch_size", c.batch_size},       {"n_epochs", c.n_epochs},
       {"gamma", c.gamma},                 {"gae_lambda", c.gae_lambda},
       {"clip_range", c.clip_range},       {"ent_coef", c.ent_coef},
       {"vf_coef", c.vf_coef},             {"max_grad_norm", c.max_grad_norm},
       {"normalize_advantage", c.normalize_advantage}, {"adam_beta1", c.adam_beta1},
       {"adam_beta2", c.adam_beta2},       {"adam_eps", c.adam_eps}};
}

void from_json(const nlohmann::json& j, PpoConfig& c) {
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.n_steps = j.value("n_steps", c.n_steps);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.n_epochs = j.value("n_epochs", c.n_epochs);
  c.gamma = j.value("gamma", c.gamma);
  c.gae_lambda = j.value("gae_lambda", c.gae_lambda);
  c.clip_range = j.value("clip_range", c.clip_range);
  c.ent_coef = j.value("ent_coef", c.ent_coef);
  c.vf_coef = j.value("vf_coef", c.vf_coef);
  c.max_grad_norm = j.value("max_grad_norm", c.max_grad_norm);
  c.normalize_advantage = j.value("normalize_advantage", c.normalize_advantage);
  c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
  c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
  c.adam_eps = j.value("adam_eps", c.adam_eps);
  c.validate();
}

LossTerms ppo_loss(const PolicyParams& params, const Minibatch& batch, const PpoConfig& cfg, PolicyParams* grad) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw std::invalid_argument("empty minibatch");
  const double inv_n = 1.0 / static_cast<double>(n);
  const Eigen::Index act = params.log_std.size();

  Mlp::Tape pi_tape, vf_tape;
  const Eigen::MatrixXd mean = params.policy.forward(batch.obs, pi_tape);
  const Eigen::MatrixXd value = params.value.forward(batch.obs, vf_tape);
  const Eigen::VectorXd inv_std = (-params.log_std.array()).exp();

  LossTerms out;
  Eigen::MatrixXd z(act, n);
  Eigen::VectorXd dlogp(n);
  for (Eigen::Index b = 0; b < n; ++b) {
    z.col(b) = (batch.pre_squash.col(b) - mean.col(b)).cwiseProduct(inv_std);
    const double logp = gaussian_log_prob(batch.pre_squash.col(b), mean.col(b), params.log_std) -
                        squash_log_jacobian(batch.pre_squash.col(b));
    const double log_ratio = logp - batch.old_log_prob[b];
    const double ratio = std::exp(log_ratio);
    const double a = batch.advantages[b];
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip_range, 1.0 + cfg.clip_range);
    const double s1 = ratio * a;
    const double s2 = clipped * a;
    out.policy -= std::min(s1, s2) * inv_n;
    dlogp[b] = s1 <= s2 ? -a * ratio * inv_n : 0.0;
    out.approx_kl += ((ratio - 1.0) - log_ratio) * inv_n;
    if (std::abs(ratio - 1.0) > cfg.clip_range) out.clip_fraction += inv_n;
  }
  out.entropy = -gaussian_entropy(params.log_std);
  const Eigen::RowVectorXd err = batch.returns.transpose() - value.row(0);
  out.value = err.squaredNorm() * inv_n;
  out.total = out.policy + cfg.ent_coef * out.entropy + cfg.vf_coef * out.value;

  if (grad != nullptr) {
    *grad = params.zeros_like();
    // d logp / d mean = z / std ; d logp / d log_std = z^2 - 1
    Eigen::MatrixXd dmean(act, n);
    for (Eigen::Index b = 0; b < n; ++b) dmean.col(b) = dlogp[b] * z.col(b).cwiseProduct(inv_std);
    params.policy.backward(pi_tape, dmean, grad->policy);
    for (Eigen::Index i = 0; i < act; ++i) {
      double g = -cfg.ent_coef;
      for (Eigen::Index b = 0; b < n; ++b) g += dlogp[b] * (z(i, b) * z(i, b) - 1.0);
      grad->log_std[i] = g;
    }
    const Eigen::MatrixXd dvalue = (-2.0 * cfg.vf_coef * inv_n) * err;
    params.value.backward(vf_tape, dvalue, grad->value);
  }
  return out;
}

Adam::Adam(std::size_t size, double beta1, double beta2, double eps)
    : m_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size))),
      v_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size))),
      beta1_(beta1),
      beta2_(beta2),
      eps_(eps) {}

void Adam::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double lr) {
  if (params.size() != m_.size() || grad.size() != m_.size()) throw std::invalid_argument("Adam size mismatch");
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  params.array() -= lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
}

namespace {

std::vector<std::size_t> permutation(std::size_t n, util::Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform(0.0, 1.0) * static_cast<double>(i));
    std::swap(idx[i - 1], idx[std::min(j, i - 1)]);
  }
  return idx;
}

Minibatch gather(const RolloutBuffer& buffer, const std::vector<std::size_t>& idx, std::size_t begin,
                 std::size_t end, bool normalize) {
  const auto& first = buffer[idx[begin]];
  const auto n = static_cast<Eigen::Index>(end - begin);
  Minibatch mb;
  mb.obs.resize(first.obs.size(), n);
  mb.pre_squash.resize(first.pre_squash.size(), n);
  mb.old_log_prob.resize(n);
  mb.advantages.resize(n);
  mb.returns.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const std::size_t i = idx[begin + static_cast<std::size_t>(c)];
    const auto& t = buffer[i];
    mb.obs.col(c) = t.obs;
    mb.pre_squash.col(c) = t.pre_squash;
    mb.old_log_prob[c] = t.log_prob;
    mb.advantages[c] = buffer.advantages()[i];
    mb.returns[c] = buffer.returns()[i];
  }
  if (normalize && n > 1) {
    const double mu = mb.advantages.mean();
    const double sd = std::sqrt((mb.advantages.array() - mu).square().sum() / static_cast<double>(n - 1));
    mb.advantages = (mb.advantages.array() - mu) / (sd + 1e-8);
  }
  return mb;
}

}  // namespace

UpdateStats ppo_update(PolicyParams& params, const RolloutBuffer& buffer, const PpoConfig& cfg, const PolicyArch& arch,
                       Adam& optimizer, util::Rng& rng) {
  if (!buffer.has_advantages()) throw std::logic_error("ppo_update needs computed advantages");
  const std::size_t n = buffer.size();
  const auto bs = static_cast<std::size_t>(cfg.batch_size);
  UpdateStats stats;
  PolicyParams grad = params.zeros_like();
  for (int epoch = 0; epoch < cfg.n_epochs; ++epoch) {
    const auto idx = permutation(n, rng);
    for (std::size_t begin = 0; begin < n; begin += bs) {
      const std::size_t end = std::min(n, begin + bs);
      const Minibatch mb = gather(buffer, idx, begin, end, cfg.normalize_advantage);
      const LossTerms loss = ppo_loss(params, mb, cfg, &grad);
      Eigen::VectorXd g = grad.flatten();
      if (!std::isfinite(loss.total) || !g.allFinite()) {
        std::ostringstream msg;
        msg << "PPO diverged at epoch " << epoch << ", minibatch " << begin / bs << ": loss=" << loss.total
            << " policy=" << loss.policy << " value=" << loss.value << " entropy=" << loss.entropy;
        throw TrainingDivergence(msg.str());
      }
      const double norm = g.norm();
      const double coef = cfg.max_grad_norm / (norm + 1e-6);
      if (coef < 1.0) g *= coef;
      Eigen::VectorXd flat = params.flatten();
      optimizer.step(flat, g, cfg.learning_rate);
      params.assign(flat);
      params.clamp_log_std(arch.log_std_min, arch.log_std_max);

      stats.policy_loss += loss.policy;
      stats.value_loss += loss.value;
      stats.entropy_loss += loss.entropy;
      stats.approx_kl += loss.approx_kl;
      stats.clip_fraction += loss.clip_fraction;
      stats.grad_norm += norm;
      ++stats.minibatches;
    }
  }
  if (!params.all_finite()) throw TrainingDivergence("PPO produced non-finite parameters");
  const double k = stats.minibatches > 0 ? 1.0 / stats.minibatches : 0.0;
  stats.policy_loss *= k;
  stats.value_loss *= k;
  stats.entropy_loss *= k;
  stats.approx_kl *= k;
  stats.clip_fraction *= k;
  stats.grad_norm *= k;
  return stats;
}

}  // namespace probsafe::rl
