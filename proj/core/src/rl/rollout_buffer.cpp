#include "probsafe/rl/rollout_buffer.hpp"

#include <stdexcept>

namespace probsafe::rl {

RolloutBuffer::RolloutBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("rollout buffer capacity must be positive");
  data_.reserve(capacity);
}

void RolloutBuffer::add(Transition t) {
  if (full()) throw std::logic_error("rollout buffer is full");
  data_.push_back(std::move(t));
  advantages_.clear();
  returns_.clear();
}

void RolloutBuffer::clear() {
  data_.clear();
  advantages_.clear();
  returns_.clear();
}

void RolloutBuffer::compute_advantages(double last_value, double gamma, double lambda) {
  std::vector<double> rewards, values;
  std::vector<bool> dones;
  rewards.reserve(data_.size());
  values.reserve(data_.size());
  dones.reserve(data_.size());
  for (const auto& t : data_) {
    rewards.push_back(t.reward);
    values.push_back(t.value);
    dones.push_back(t.done);
  }
  advantages_ = gae_advantages(rewards, values, dones, last_value, gamma, lambda);
  returns_.resize(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) returns_[i] = advantages_[i] + values[i];
}

std::vector<double> gae_advantages(const std::vector<double>& rewards, const std::vector<double>& values,
                                   const std::vector<bool>& dones, double last_value, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) throw std::invalid_argument("GAE inputs differ in length");
  std::vector<double> adv(n);
  double gae = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double next_value = t + 1 == n ? last_value : values[t + 1];
    const double keep = dones[t] ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * next_value * keep - values[t];
    gae = delta + gamma * lambda * keep * gae;
    adv[t] = gae;
  }
  return adv;
}

}  // namespace probsafe::rl
