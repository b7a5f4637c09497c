#include "probsafe/verify/interval_box.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace probsafe::verify {

IntervalBox::IntervalBox(std::vector<double> lower, std::vector<double> upper,
                         std::vector<std::string> units)
    : lower_(std::move(lower)), upper_(std::move(upper)), units_(std::move(units)) {
  if (lower_.size() != upper_.size()) throw std::invalid_argument("box bound dimensions differ");
  if (!units_.empty() && units_.size() != lower_.size()) {
    throw std::invalid_argument("box units must match its dimension");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
      throw std::invalid_argument("box bounds must be finite");
    }
    if (lower_[i] > upper_[i]) {
      throw std::invalid_argument("box axis " + std::to_string(i) + " has lower > upper");
    }
  }
}

IntervalBox IntervalBox::degenerate(std::size_t dimension) {
  return IntervalBox(std::vector<double>(dimension, 0.0), std::vector<double>(dimension, 0.0));
}

IntervalBox IntervalBox::symmetric(std::vector<double> half_widths, std::vector<std::string> units) {
  std::vector<double> lower(half_widths.size());
  for (std::size_t i = 0; i < half_widths.size(); ++i) {
    if (half_widths[i] < 0.0) throw std::invalid_argument("half widths must be >= 0");
    lower[i] = -half_widths[i];
  }
  return IntervalBox(std::move(lower), std::move(half_widths), std::move(units));
}

bool IntervalBox::contains(std::span<const double> point) const {
  if (point.size() != dimension()) throw std::invalid_argument("point dimension mismatch");
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (!(point[i] >= lower_[i] && point[i] <= upper_[i])) return false;
  }
  return true;
}

bool IntervalBox::contains(const IntervalBox& other) const {
  if (other.dimension() != dimension()) throw std::invalid_argument("box dimension mismatch");
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (other.lower_[i] < lower_[i] || other.upper_[i] > upper_[i]) return false;
  }
  return true;
}

bool IntervalBox::contains_origin() const { return contains(std::vector<double>(dimension(), 0.0)); }

bool IntervalBox::is_degenerate() const {
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (lower_[i] != upper_[i]) return false;
  }
  return true;
}

IntervalBox IntervalBox::scaled(std::span<const double> factors) const {
  if (factors.size() != dimension()) throw std::invalid_argument("scale factor dimension mismatch");
  std::vector<double> lo(lower_), hi(upper_);
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (!(factors[i] >= 0.0)) throw std::invalid_argument("scale factors must be >= 0");
    lo[i] *= factors[i];
    hi[i] *= factors[i];
  }
  return IntervalBox(std::move(lo), std::move(hi), units_);
}

IntervalBox IntervalBox::translated(std::span<const double> offset) const {
  if (offset.size() != dimension()) throw std::invalid_argument("offset dimension mismatch");
  std::vector<double> lo(lower_), hi(upper_);
  for (std::size_t i = 0; i < dimension(); ++i) {
    lo[i] += offset[i];
    hi[i] += offset[i];
  }
  return IntervalBox(std::move(lo), std::move(hi), units_);
}

std::vector<double> IntervalBox::sample(util::Rng& rng) const {
  std::vector<double> out(dimension());
  for (std::size_t i = 0; i < dimension(); ++i) out[i] = rng.uniform(lower_[i], upper_[i]);
  return out;
}

void to_json(nlohmann::json& j, const IntervalBox& box) {
  j = nlohmann::json{{"lower", box.lower()}, {"upper", box.upper()}};
  if (!box.units().empty()) j["units"] = box.units();
}

void from_json(const nlohmann::json& j, IntervalBox& box) {
  std::vector<std::string> units;
  if (j.contains("units")) units = j.at("units").get<std::vector<std::string>>();
  box = IntervalBox(j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>(),
                    std::move(units));
}

}  // namespace probsafe::verify
