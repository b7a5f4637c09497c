#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "probsafe/stl/signal.hpp"
#include "probsafe/util/random.hpp"
#include "probsafe/verify/interval_box.hpp"

namespace probsafe::verify {

/// Executable closed-loop system treated as a black box.
///
/// A rollout must be a deterministic function of its initial condition,
/// expansion set and generator state. Implementations are shared across
/// worker threads, so both member functions must be safe to call
/// concurrently.
class RolloutSource {
 public:
  virtual ~RolloutSource() = default;

  /// Names of the initial-condition components, used as CSV headers.
  virtual std::vector<std::string> initial_condition_names() const = 0;
  /// Uniform draw from the declared initial-condition set.
  virtual std::vector<double> sample_initial_condition(util::Rng& rng) const = 0;
  /// Runs one closed-loop episode. With an expansion set, a fresh uniform
  /// draw from it is added to the controller output at every step.
  virtual stl::Signal rollout(const std::vector<double>& initial_condition,
                              const IntervalBox* expansion, util::Rng& rng) const = 0;
};

using RobustnessFn = std::function<double(const stl::Signal&)>;

class RolloutFailure : public std::runtime_error {
 public:
  RolloutFailure(std::size_t sample_index, std::uint64_t seed, const std::string& reason);
  std::size_t sample_index() const noexcept { return sample_index_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::size_t sample_index_;
  std::uint64_t seed_;
};

struct VerificationReport {
  std::vector<double> robustnesses;
  double rho_star = 0.0;
  double epsilon = 0.0;
  std::int64_t n_samples = 0;
  double confidence = 0.0;
  std::uint64_t base_seed = 0;
  std::vector<std::uint64_t> sample_seeds;
  std::vector<std::vector<double>> per_sample_params;
  std::vector<std::string> param_names;
  std::optional<IntervalBox> expansion;

  bool passed() const noexcept { return rho_star >= 0.0; }
  /// Throws std::logic_error if an invariant (rho_star = min, confidence
  /// formula, lengths) does not hold.
  void check_invariants() const;
};

void to_json(nlohmann::json& j, const VerificationReport& report);
void from_json(const nlohmann::json& j, VerificationReport& report);
std::string report_samples_csv(const VerificationReport& report);
void write_report(const VerificationReport& report, const std::filesystem::path& json_path,
                  const std::filesystem::path& csv_path);

struct ProbvOptions {
  std::int64_t n_samples = 50;
  double epsilon = 0.05;
  std::uint64_t base_seed = 0;
  /// Worker threads; results do not depend on this.
  int jobs = 1;
};

/// Scenario verification: N i.i.d. rollouts, report the minimum robustness.
/// Sample i draws everything from the stream derive_seed(base_seed, i).
/// `expansion == nullptr` runs the controller unperturbed.
VerificationReport probv(const RolloutSource& source, const IntervalBox* expansion,
                         const RobustnessFn& robustness_fn, const ProbvOptions& options);

}  // namespace probsafe::verify
