#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "probsafe/evasion/types.hpp"

namespace probsafe::rl {

struct Transition {
  Eigen::VectorXd obs;
  Eigen::VectorXd pre_squash;
  Eigen::VectorXd raw;
  evasion::Control applied;
  double log_prob = 0.0;
  double value = 0.0;
  double reward = 0.0;
  /// The episode ended after this transition (its successor is a reset).
  bool done = false;
};

/// Fixed-capacity on-policy storage.
class RolloutBuffer {
 public:
  explicit RolloutBuffer(std::size_t capacity);

  void add(Transition t);
  void clear();

  std::size_t size() const noexcept { return data_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool full() const noexcept { return data_.size() == capacity_; }
  bool has_advantages() const noexcept { return advantages_.size() == data_.size() && !data_.empty(); }

  const Transition& operator[](std::size_t i) const { return data_.at(i); }
  const std::vector<Transition>& transitions() const noexcept { return data_; }
  const std::vector<double>& advantages() const noexcept { return advantages_; }
  const std::vector<double>& returns() const noexcept { return returns_; }

  /// Fills advantages and returns. `last_value` bootstraps the tail when
  /// the final transition is not done; pass 0 for a terminated tail.
  void compute_advantages(double last_value, double gamma, double lambda);

 private:
  std::size_t capacity_;
  std::vector<Transition> data_;
  std::vector<double> advantages_;
  std::vector<double> returns_;
};

/// Generalised advantage estimation over rewards/values/done flags.
/// Returns the advantages; returns = advantages + values.
std::vector<double> gae_advantages(const std::vector<double>& rewards, const std::vector<double>& values,
                                   const std::vector<bool>& dones, double last_value, double gamma, double lambda);

}  // namespace probsafe::rl
