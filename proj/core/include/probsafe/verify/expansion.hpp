#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "probsafe/verify/interval_box.hpp"
#include "probsafe/verify/scenario.hpp"

namespace probsafe::verify {

/// The initial expansion set already fails verification; retry with a
/// smaller one.
class InitialSetTooLarge : public std::runtime_error {
 public:
  explicit InitialSetTooLarge(VerificationReport report);
  const VerificationReport& report() const noexcept { return report_; }

 private:
  VerificationReport report_;
};

enum class ExpansionStatus {
  kConverged,        ///< Growth stopped at the first failed verification.
  kMaxItersReached,  ///< Every attempted growth passed; result is the last one.
};

struct ExpansionAttempt {
  IntervalBox box;
  std::uint64_t seed = 0;
  double rho_star = 0.0;
};

struct ExpansionResult {
  IntervalBox expansion;
  ExpansionStatus status = ExpansionStatus::kConverged;
  /// Growth attempts beyond the initial verification.
  int growth_steps = 0;
  /// Seed under which `expansion` was verified, and that report.
  std::uint64_t verified_seed = 0;
  VerificationReport verified_report;
  std::vector<ExpansionAttempt> history;
};

struct ExpansionOptions {
  ProbvOptions probv;  ///< base_seed seeds the whole search.
  int max_iters = 100;
};

/// Seed of the probv call for attempt `attempt` (0 = initial set).
std::uint64_t expansion_attempt_seed(std::uint64_t base_seed, int attempt);

/// Grows E_temp = (1 + i * delta_f) * e_init axis-wise while verification
/// keeps passing (rho* >= 0) and returns the last verified set.
///
/// Throws InitialSetTooLarge if e_init itself fails.
ExpansionResult find_expansion_set(const RolloutSource& source, const RobustnessFn& robustness_fn,
                                   const IntervalBox& e_init, const std::vector<double>& delta_f,
                                   const ExpansionOptions& options);

void to_json(nlohmann::json& j, const ExpansionResult& result);
void from_json(const nlohmann::json& j, ExpansionResult& result);

}  // namespace probsafe::verify
