#pragma once

#include <cstdint>
#include <random>

namespace probsafe::util {

/// One SplitMix64 step (golden-ratio increment, then the finalizer) on `x`.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives the seed of sub-stream `index` of `base_seed`.
///
/// Streams are addressed by counter rather than by advancing a shared
/// generator, so sample i always sees the same numbers no matter which
/// worker evaluates it or in what order.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [lo, hi]. Returns lo exactly when lo == hi.
  double uniform(double lo, double hi);
  double normal();

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace probsafe::util
