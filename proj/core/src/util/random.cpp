#include "probsafe/util/random.hpp"

namespace probsafe::util {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(base_seed) ^ splitmix64(~index));
}

double Rng::uniform(double lo, double hi) {
  // 53 random mantissa bits; the mapping is fixed so streams are portable
  // across standard library implementations.
  const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

double Rng::normal() { return normal_(engine_); }

}  // namespace probsafe::util
