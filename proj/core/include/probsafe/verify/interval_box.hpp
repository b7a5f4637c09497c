#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "probsafe/util/random.hpp"

namespace probsafe::verify {

/// Axis-aligned box [lower, upper] in R^m.
class IntervalBox {
 public:
  IntervalBox() = default;
  /// Throws std::invalid_argument on dimension mismatch, non-finite
  /// bounds or lower[i] > upper[i].
  IntervalBox(std::vector<double> lower, std::vector<double> upper,
              std::vector<std::string> units = {});

  /// The box {0} in R^m.
  static IntervalBox degenerate(std::size_t dimension);
  /// [-h_i, h_i] per axis.
  static IntervalBox symmetric(std::vector<double> half_widths, std::vector<std::string> units = {});

  std::size_t dimension() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  const std::vector<std::string>& units() const noexcept { return units_; }
  double width(std::size_t axis) const { return upper_.at(axis) - lower_.at(axis); }

  bool contains(std::span<const double> point) const;
  bool contains(const IntervalBox& other) const;
  bool contains_origin() const;
  bool is_degenerate() const;

  /// Multiplies both bounds of axis i by factors[i] >= 0.
  IntervalBox scaled(std::span<const double> factors) const;
  /// Minkowski sum {offset} + box.
  IntervalBox translated(std::span<const double> offset) const;

  /// Uniform draw, one coordinate per axis in axis order.
  std::vector<double> sample(util::Rng& rng) const;

  bool operator==(const IntervalBox& other) const {
    return lower_ == other.lower_ && upper_ == other.upper_;
  }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> units_;
};

void to_json(nlohmann::json& j, const IntervalBox& box);
void from_json(const nlohmann::json& j, IntervalBox& box);

}  // namespace probsafe::verify
