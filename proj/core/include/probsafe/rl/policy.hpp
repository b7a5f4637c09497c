#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "probsafe/rl/mlp.hpp"
#include "probsafe/util/random.hpp"

namespace probsafe::rl {

struct PolicyArch {
  int obs_dim = 7;
  int act_dim = 2;
  std::vector<int> hidden{128, 128};
  double log_std_init = 0.0;
  double log_std_min = -5.0;
  double log_std_max = 1.0;

  void validate() const;
  std::vector<int> policy_sizes() const;
  std::vector<int> value_sizes() const;
};

void to_json(nlohmann::json& j, const PolicyArch& arch);
void from_json(const nlohmann::json& j, PolicyArch& arch);

/// Gaussian policy over pre-squash actions u with raw action tanh(u), plus
/// a separate value network.
struct PolicyParams {
  Mlp policy;               ///< obs -> mean of u
  Eigen::VectorXd log_std;  ///< state independent
  Mlp value;                ///< obs -> V

  /// Zero network, log_std = arch.log_std_init.
  static PolicyParams zeros(const PolicyArch& arch);
  /// Orthogonal init (gains sqrt 2 hidden, 0.01 policy head, 1 value head).
  static PolicyParams initialize(const PolicyArch& arch, util::Rng& rng);
  /// Same shapes, all zero.
  PolicyParams zeros_like() const;

  int obs_dim() const { return policy.input_size(); }
  int act_dim() const { return policy.output_size(); }

  std::size_t size() const;
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
  void clamp_log_std(double lo, double hi);
  bool all_finite() const;
};

/// Thrown when a network produces a non-finite value.
class NonFiniteOutput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ActionSample {
  Eigen::VectorXd pre_squash;
  Eigen::VectorXd raw;  ///< tanh(pre_squash), in [-1, 1]
  double log_prob = 0.0;
};

/// sum_i log(1 - tanh(u_i)^2), evaluated stably.
double squash_log_jacobian(const Eigen::VectorXd& u);
double gaussian_log_prob(const Eigen::VectorXd& u, const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std);
/// Log-density of raw = tanh(u) at the given pre-squash point.
double squashed_log_prob(const Eigen::VectorXd& u, const Eigen::VectorXd& mean, const Eigen::VectorXd& log_std);
double gaussian_entropy(const Eigen::VectorXd& log_std);

Eigen::VectorXd to_vector(std::span<const double> obs);

ActionSample policy_sample(const PolicyParams& params, std::span<const double> obs, util::Rng& rng);
/// tanh of the mean: the deterministic raw action.
Eigen::VectorXd policy_mean(const PolicyParams& params, std::span<const double> obs);
double value_estimate(const PolicyParams& params, std::span<const double> obs);

}  // namespace probsafe::rl
