#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "probsafe/pipeline/config.hpp"
#include "probsafe/rl/policy.hpp"
#include "probsafe/verify/expansion.hpp"
#include "probsafe/verify/scenario.hpp"

namespace probsafe::pipeline {

enum ExitCode : int { kPass = 0, kFail = 1, kError = 2 };

struct StageResult {
  int exit_code = kPass;
  std::string message;
};

const char* library_version();

/// Artifact locations under the output directory.
struct Layout {
  std::filesystem::path root;

  std::filesystem::path manifest() const { return root / "manifest.json"; }
  std::filesystem::path expansion() const { return root / "expansion" / "expansion.json"; }
  std::filesystem::path expansion_failure() const { return root / "expansion" / "initial_report.json"; }
  std::filesystem::path safe_report() const { return root / "verify_safe" / "report.json"; }
  std::filesystem::path safe_samples() const { return root / "verify_safe" / "samples.csv"; }
  std::filesystem::path policy() const { return root / "train" / "policy.bin"; }
  std::filesystem::path training_log() const { return root / "train" / "training_log.csv"; }
  std::filesystem::path evaluation() const { return root / "train" / "evaluation.json"; }
  std::filesystem::path agent_report() const { return root / "verify_agent" / "report.json"; }
  std::filesystem::path agent_samples() const { return root / "verify_agent" / "samples.csv"; }
  std::filesystem::path histogram_samples() const { return root / "histogram" / "robustness.csv"; }
  std::filesystem::path histogram_summary() const { return root / "histogram" / "summary.json"; }
};

/// Reads a persisted expansion result and checks that it was verified
/// (report invariants hold and rho* >= 0). Throws std::runtime_error
/// otherwise.
verify::ExpansionResult load_verified_expansion(const std::filesystem::path& path);

/// Library-level stage bodies; no files are written.
verify::ExpansionResult run_expansion(const PipelineConfig& cfg);
verify::VerificationReport verify_safe_controller(const PipelineConfig& cfg, const verify::IntervalBox* expansion,
                                                  std::int64_t n_samples, std::uint64_t seed);
verify::VerificationReport verify_learned_policy(const PipelineConfig& cfg, const rl::PolicyParams& params,
                                                 const verify::IntervalBox& expansion, std::int64_t n_samples,
                                                 std::uint64_t seed);

struct SeriesSummary {
  std::int64_t n = 0;
  double mean = 0.0;
  double std = 0.0;  ///< population
  double min = 0.0;
  double max = 0.0;
};
SeriesSummary summarize(const std::vector<double>& xs);

StageResult cmd_expand(const PipelineConfig& cfg);
/// Uses `expansion_file`, else the persisted expansion of the output
/// directory.
StageResult cmd_verify_safe(const PipelineConfig& cfg, const std::optional<std::filesystem::path>& expansion_file = {});
StageResult cmd_train(const PipelineConfig& cfg, const std::optional<std::filesystem::path>& expansion_file = {});
StageResult cmd_verify_agent(const PipelineConfig& cfg, const std::optional<std::filesystem::path>& policy_file = {});
/// Series: safe_deterministic, safe_perturbed (needs a persisted expansion)
/// and learned (needs a policy).
StageResult cmd_histogram(const PipelineConfig& cfg, const std::optional<std::filesystem::path>& policy_file = {},
                          const std::optional<std::filesystem::path>& expansion_file = {});

}  // namespace probsafe::pipeline
