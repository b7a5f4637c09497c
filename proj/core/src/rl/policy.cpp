#include "probsafe/rl/policy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace probsafe::rl {

void PolicyArch::validate() const {
  if (obs_dim < 1 || act_dim < 1) throw std::invalid_argument("policy dimensions must be positive");
  for (const int h : hidden) {
    if (h < 1) throw std::invalid_argument("hidden widths must be positive");
  }
  if (!(log_std_min <= log_std_max)) throw std::invalid_argument("log_std range is empty");
  if (log_std_init < log_std_min || log_std_init > log_std_max) {
    throw std::invalid_argument("log_std_init outside the clamp range");
  }
}

std::vector<int> PolicyArch::policy_sizes() const {
  std::vector<int> s{obs_dim};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(act_dim);
  return s;
}

std::vector<int> PolicyArch::value_sizes() const {
  std::vector<int> s{obs_dim};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(1);
  return s;
}

void to_json(nlohmann::json& j, const PolicyArch& a) {
  j = {{"obs_dim", a.obs_dim},         {"act_dim", a.act_dim},         {"hidden", a.hidden},
       {"log_std_init", a.log_std_init}, {"log_std_min", a.log_std_min}, {"log_std_max", a.log_std_max},
       {"squash", "tanh"}};
}

void from_json(const nlohmann::json& j, PolicyArch& a) {
  a.obs_dim = j.value("obs_dim", a.obs_dim);
  a.act_dim = j.value("act_dim", a.act_dim);
  a.hidden = j.value("hidden", a.hidden);
  a.log_std_init = j.value("log_std_init", a.log_std_init);
  a.log_std_min = j.value("log_std_min", a.log_std_min);
  a.log_std_max = j.value("log_std_max", a.log_std_max);
  a.validate();
}

PolicyParams PolicyParams::zeros(const PolicyArch& arch) {
  arch.validate();
  return {Mlp(arch.policy_sizes()), Eigen::VectorXd::Constant(arch.act_dim, arch.log_std_init),
          Mlp(arch.value_sizes())};
}

PolicyParams PolicyParams::initialize(const PolicyArch& arch, util::Rng& rng) {
  arch.validate();
  PolicyParams p;
  p.policy = Mlp::orthogonal(arch.policy_sizes(), std::sqrt(2.0), 0.01, rng);
  p.log_std = Eigen::VectorXd::Constant(arch.act_dim, arch.log_std_init);
  p.value = Mlp::orthogonal(arch.value_sizes(), std::sqrt(2.0), 1.0, rng);
  return p;
}

PolicyParams PolicyParams::zeros_like() const {
  PolicyParams z{policy, Eigen::VectorXd::Zero(log_std.size()), value};
  z.policy.set_zero();
  z.value.set_zero();
  return z;
}

std::size_t PolicyParams::size() const {
  return policy.parameter_count() + static_cast<std::size_t>(log_std.size()) + value.parameter_count();
}

Eigen::VectorXd PolicyParams::flatten() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(size()));
  Eigen::Index offset = 0;
  policy.flatten_into(out, offset);
  out.segment(offset, log_std.size()) = log_std;
  offset += log_std.size();
  value.flatten_into(out, offset);
  return out;
}

void PolicyParams::assign(const Eigen::VectorXd& flat) {
  if (flat.size() != static_cast<Eigen::Index>(size())) throw std::invalid_argument("parameter vector size mismatch");
  Eigen::Index offset = 0;
  policy.assign_from(flat, offset);
  log_std = flat.segment(offset, log_std.size());
  offset += log_std.size();
  value.assign_from(flat, offset);
}

void PolicyParams::clamp_log_std(double lo, double hi) { log_std = log_std.cwiseMax(lo).cwiseMin(hi); }

bool PolicyParams::all_finite() const { return policy.all_finite() && value.all_finite() && log_std.allFinite(); }

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

double squash_log_jacobian(const Eigen::VectorXd& u) {
  // log(1 - tanh(x)^2) = 2 (log 2 - x - softplus(-2x))
  double s = 0.0;
  for (const double x : u) s += 2.0 * (std::numbers::ln2 - x - softplus(-2.0 * x));
  return s;
}

double gaussian_log_prob(const Eigen::VectorXd& u, const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double z = (u[i] - mean[i]) * std::exp(-log_std[i]);
    s += -0.5 * z * z - log_std[i] - kHalfLog2Pi;
  }
  return s;
}

double squashed_log_prob(const Eigen::VectorXd& u, const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std) {
  return gaussian_log_prob(u, mean, log_std) - squash_log_jacobian(u);
}

double gaussian_entropy(const Eigen::VectorXd& log_std) {
  return log_std.sum() + static_cast<double>(log_std.size()) * (0.5 + kHalfLog2Pi);
}

Eigen::VectorXd to_vector(std::span<const double> obs) {
  return Eigen::Map<const Eigen::VectorXd>(obs.data(), static_cast<Eigen::Index>(obs.size()));
}

namespace {

Eigen::VectorXd checked_mean(const PolicyParams& params, std::span<const double> obs) {
  if (static_cast<int>(obs.size()) != params.obs_dim()) throw std::invalid_argument("observation dimension mismatch");
  Eigen::VectorXd mean = params.policy.forward_one(to_vector(obs));
  if (!mean.allFinite()) throw NonFiniteOutput("policy network produced a non-finite mean");
  return mean;
}

}  // namespace

ActionSample policy_sample(const PolicyParams& params, std::span<const double> obs, util::Rng& rng) {
  const Eigen::VectorXd mean = checked_mean(params, obs);
  ActionSample s;
  s.pre_squash.resize(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) s.pre_squash[i] = mean[i] + std::exp(params.log_std[i]) * rng.normal();
  s.raw = s.pre_squash.array().tanh();
  s.log_prob = squashed_log_prob(s.pre_squash, mean, params.log_std);
  return s;
}

Eigen::VectorXd policy_mean(const PolicyParams& params, std::span<const double> obs) {
  return checked_mean(params, obs).array().tanh();
}

double value_estimate(const PolicyParams& params, std::span<const double> obs) {
  if (static_cast<int>(obs.size()) != params.obs_dim()) throw std::invalid_argument("observation dimension mismatch");
  const double v = params.value.forward_one(to_vector(obs))[0];
  if (!std::isfinite(v)) throw NonFiniteOutput("value network produced a non-finite estimate");
  return v;
}

}  // namespace probsafe::rl
