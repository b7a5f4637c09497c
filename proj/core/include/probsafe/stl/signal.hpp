#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace probsafe::stl {

/// Uniformly sampled trajectory: K+1 states of dimension n, step dt.
class Signal {
 public:
  Signal(std::size_t dimension, double dt, double start_time = 0.0);
  Signal(std::vector<std::vector<double>> states, double dt, double start_time = 0.0);

  void push_back(std::span<const double> state);

  std::size_t size() const noexcept { return dimension_ == 0 ? 0 : data_.size() / dimension_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t dimension() const noexcept { return dimension_; }
  double dt() const noexcept { return dt_; }
  double start_time() const noexcept { return start_time_; }
  double time_at(std::size_t k) const noexcept { return start_time_ + static_cast<double>(k) * dt_; }

  /// Throws std::out_of_range when k >= size().
  std::span<const double> state(std::size_t k) const;
  std::span<const double> back() const { return state(size() - 1); }
  double at(std::size_t k, std::size_t component) const { return state(k)[component]; }

  bool all_finite() const noexcept;

 private:
  std::size_t dimension_;
  double dt_;
  double start_time_;
  std::vector<double> data_;
};

using PredicateFn = std::function<double(std::span<const double>)>;

/// Named predicate functions h: a predicate holds iff h(x) >= 0.
class PredicateTable {
 public:
  PredicateTable& add(std::string name, PredicateFn fn);

  bool contains(const std::string& name) const { return table_.count(name) != 0; }
  /// Throws EvaluationError for unknown names.
  const PredicateFn& get(const std::string& name) const;

 private:
  std::unordered_map<std::string, PredicateFn> table_;
};

}  // namespace probsafe::stl
