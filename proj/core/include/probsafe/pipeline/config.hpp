#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "probsafe/control/safe_controller.hpp"
#include "probsafe/evasion/task_config.hpp"
#include "probsafe/rl/trainer.hpp"
#include "probsafe/verify/interval_box.hpp"

namespace probsafe::pipeline {

struct VerificationSettings {
  std::int64_t n_samples = 50;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
};

struct ExpansionSettings {
  verify::IntervalBox initial{{-0.0002, -0.005}, {0.0002, 0.005}, {"m/s", "rad/s"}};
  std::vector<double> delta_f{10.0, 1.0};
  int max_iters = 100;
  std::uint64_t seed = 2;
};

struct TrainingSettings {
  rl::TrainingConfig config;
  std::uint64_t seed = 3;
  std::uint64_t eval_seed = 4;
};

struct HistogramSettings {
  std::int64_t n_samples = 200;
  std::uint64_t seed = 5;
};

struct PipelineConfig {
  evasion::TaskConfig task;
  control::SafeControllerConfig controller;
  VerificationSettings verification;
  ExpansionSettings expansion;
  TrainingSettings training;
  HistogramSettings histogram;
  std::filesystem::path output_dir = "out";
  int jobs = 1;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

void to_json(nlohmann::json& j, const PipelineConfig& cfg);
/// Missing sections and keys keep their defaults.
void from_json(const nlohmann::json& j, PipelineConfig& cfg);

PipelineConfig load_config(const std::filesystem::path& path);
/// Defaults as an indented JSON document.
std::string default_config_text();
/// FNV-1a of the canonical JSON serialisation.
std::string config_hash(const PipelineConfig& cfg);

}  // namespace probsafe::pipeline
