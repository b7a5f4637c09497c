#include "probsafe/verify/confidence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace probsafe::verify {

double confidence(double epsilon, std::int64_t n) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::domain_error("epsilon must lie in [0, 1]");
  if (n < 1) throw std::domain_error("sample count must be >= 1");
  // expm1/log1p keep full precision for small epsilon.
  if (epsilon == 1.0) return 1.0;
  return -std::expm1(static_cast<double>(n) * std::log1p(-epsilon));
}

std::int64_t min_samples_for(double epsilon, double target_confidence) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon must lie in (0, 1)");
  if (!(target_confidence >= 0.0 && target_confidence < 1.0)) {
    throw std::domain_error("target confidence must lie in [0, 1)");
  }
  const double estimate = std::log1p(-target_confidence) / std::log1p(-epsilon);
  auto n = static_cast<std::int64_t>(std::ceil(estimate));
  if (n < 1) n = 1;
  // The closed form can be off by one from rounding; settle it exactly.
  while (n > 1 && confidence(epsilon, n - 1) >= target_confidence) --n;
  while (confidence(epsilon, n) < target_confidence) ++n;
  return n;
}

}  // namespace probsafe::verify
