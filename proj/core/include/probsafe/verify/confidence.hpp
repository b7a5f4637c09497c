#pragma once

#include <cstdint>

namespace probsafe::verify {

/// Lower bound 1 - (1 - epsilon)^n on the probability that the minimum of
/// n i.i.d. robustness samples underperforms the (1 - epsilon) quantile.
/// Throws std::domain_error unless 0 <= epsilon <= 1 and n >= 1.
double confidence(double epsilon, std::int64_t n);

/// Smallest n with confidence(epsilon, n) >= target.
/// Throws std::domain_error unless 0 < epsilon < 1 and 0 <= target < 1.
std::int64_t min_samples_for(double epsilon, double target_confidence);

}  // namespace probsafe::verify
