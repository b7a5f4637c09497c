#include "probsafe/stl/signal.hpp"

#include <cmath>
#include <stdexcept>

#include "probsafe/stl/monitor.hpp"

namespace probsafe::stl {

Signal::Signal(std::size_t dimension, double dt, double start_time)
    : dimension_(dimension), dt_(dt), start_time_(start_time) {
  if (dimension == 0) throw std::invalid_argument("signal dimension must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("signal dt must be positive");
  if (!(start_time >= 0.0)) throw std::invalid_argument("signal start time must be >= 0");
}

Signal::Signal(std::vector<std::vector<double>> states, double dt, double start_time)
    : Signal(states.empty() ? 1 : states.front().size(), dt, start_time) {
  data_.reserve(states.size() * dimension_);
  for (const auto& s : states) push_back(s);
}

void Signal::push_back(std::span<const double> state) {
  if (state.size() != dimension_) {
    throw std::invalid_argument("state dimension " + std::to_string(state.size()) +
                                " does not match signal dimension " + std::to_string(dimension_));
  }
  data_.insert(data_.end(), state.begin(), state.end());
}

std::span<const double> Signal::state(std::size_t k) const {
  if (k >= size()) {
    throw std::out_of_range("signal index " + std::to_string(k) + " out of range (size " +
                            std::to_string(size()) + ")");
  }
  return {data_.data() + k * dimension_, dimension_};
}

bool Signal::all_finite() const noexcept {
  for (const double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

PredicateTable& PredicateTable::add(std::string name, PredicateFn fn) {
  if (!fn) throw std::invalid_argument("predicate '" + name + "' has no function");
  table_[std::move(name)] = std::move(fn);
  return *this;
}

const PredicateFn& PredicateTable::get(const std::string& name) const {
  const auto it = table_.find(name);
  if (it == table_.end()) throw EvaluationError("unresolved predicate '" + name + "'");
  return it->second;
}

}  // namespace probsafe::stl
