#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "probsafe/stl/signal.hpp"
#include "probsafe/util/random.hpp"
#include "probsafe/verify/interval_box.hpp"
#include "probsafe/verify/scenario.hpp"

namespace stubs {

using probsafe::stl::Signal;
using probsafe::util::Rng;
using probsafe::verify::IntervalBox;
using probsafe::verify::RolloutSource;

/// One-row signal holding a value; robustness reads it back.
inline Signal scalar(double v) {
  Signal s(1, 0.1);
  s.push_back(std::span<const double>(&v, 1));
  return s;
}

inline double first(const Signal& s) { return s.at(0, 0); }

/// Robustness = ic + sum of the first axis of ten disturbance draws.
class NoisySource : public RolloutSource {
 public:
  std::vector<std::string> initial_condition_names() const override { return {"x0"}; }
  std::vector<double> sample_initial_condition(Rng& rng) const override { return {rng.uniform(0.0, 1.0)}; }
  Signal rollout(const std::vector<double>& ic, const IntervalBox* e, Rng& rng) const override {
    double v = ic[0];
    for (int k = 0; k < 10 && e; ++k) v += e->sample(rng)[0];
    return scalar(v);
  }
};

/// Passes (with some seed-dependent slack) iff every half-width stays
/// below the corresponding limit.
class LimitSource : public RolloutSource {
 public:
  explicit LimitSource(std::vector<double> limits) : limits_(std::move(limits)) {}
  std::vector<std::string> initial_condition_names() const override { return {"u"}; }
  std::vector<double> sample_initial_condition(Rng& rng) const override { return {rng.uniform(0.0, 0.1)}; }
  Signal rollout(const std::vector<double>& ic, const IntervalBox* e, Rng&) const override {
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; e && i < limits_.size(); ++i) margin = std::min(margin, limits_[i] - e->upper()[i]);
    return scalar(margin < 0 ? margin : margin + ic[0]);
  }

 private:
  std::vector<double> limits_;
};

}  // namespace stubs
