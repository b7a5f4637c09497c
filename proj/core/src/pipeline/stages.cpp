#include "probsafe/pipeline/stages.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "probsafe/control/safe_controller.hpp"
#include "probsafe/evasion/rollout.hpp"
#include "probsafe/rl/action_mask.hpp"
#include "probsafe/rl/learned_controller.hpp"
#include "probsafe/rl/serialization.hpp"
#include "probsafe/rl/trainer.hpp"
#include "probsafe/util/io.hpp"

#ifndef PROBSAFE_VERSION
#define PROBSAFE_VERSION "unknown"
#endif

namespace probsafe::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

const char* library_version() { return PROBSAFE_VERSION; }

namespace {

std::shared_ptr<const control::SafeController> make_safe(const PipelineConfig& cfg) {
  return std::make_shared<const control::SafeController>(cfg.task, cfg.controller);
}

std::string fmt(double x) { return util::format_double(x); }

/// Records a stage in the manifest. Entries of other stages are kept only
/// when they were produced under the same configuration hash.
void update_manifest(const PipelineConfig& cfg, const std::string& stage, json info,
                     const std::vector<fs::path>& artifacts) {
  const Layout layout{cfg.output_dir};
  const std::string hash = config_hash(cfg);
  json manifest;
  if (fs::exists(layout.manifest())) {
    try {
      manifest = util::read_json_file(layout.manifest());
    } catch (const std::exception&) {
      manifest = json::object();
    }
  }
  if (!manifest.is_object() || manifest.value("config_hash", std::string{}) != hash) {
    manifest = json::object();
  }
  manifest["tool"] = "probsafe";
  manifest["version"] = library_version();
  manifest["config_hash"] = hash;
  manifest["config"] = cfg;
  json files = json::object();
  for (const auto& p : artifacts) {
    files[fs::relative(p, layout.root).generic_string()] = util::hex64(util::fnv1a64(util::read_text_file(p)));
  }
  info["artifacts"] = files;
  manifest["stages"][stage] = std::move(info);
  util::write_json_file(layout.manifest(), manifest);
}

fs::path resolve_expansion(const PipelineConfig& cfg, const std::optional<fs::path>& file) {
  return file.value_or(Layout{cfg.output_dir}.expansion());
}

json summary_json(const SeriesSummary& s) {
  return {{"n", s.n}, {"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}};
}

}  // namespace

verify::ExpansionResult load_verified_expansion(const fs::path& path) {
  if (!fs::exists(path)) {
    throw std::runtime_error("no verified expansion set at " + path.string() + " (run the expand stage first)");
  }
  verify::ExpansionResult result;
  try {
    result = util::read_json_file(path).get<verify::ExpansionResult>();
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot read expansion set " + path.string() + ": " + e.what());
  }
  try {
    result.verified_report.check_invariants();
  } catch (const std::logic_error& e) {
    throw std::runtime_error("inconsistent verification report in " + path.string() + ": " + e.what());
  }
  if (!result.verified_report.passed()) {
    throw std::runtime_error("expansion set at " + path.string() + " was not verified (rho* = " +
                             fmt(result.verified_report.rho_star) + ")");
  }
  if (!result.verified_report.expansion || !(*result.verified_report.expansion == result.expansion)) {
    throw std::runtime_error("expansion set at " + path.string() + " does not match its verification report");
  }
  return result;
}

verify::ExpansionResult run_expansion(const PipelineConfig& cfg) {
  cfg.validate();
  const auto safe = make_safe(cfg);
  const evasion::EvasionRolloutSource source(cfg.task, safe, safe);
  verify::ExpansionOptions options;
  options.probv.n_samples = cfg.verification.n_samples;
  options.probv.epsilon = cfg.verification.epsilon;
  options.probv.base_seed = cfg.expansion.seed;
  options.probv.jobs = cfg.jobs;
  options.max_iters = cfg.expansion.max_iters;
  return verify::find_expansion_set(source, evasion::make_robustness_fn(cfg.task), cfg.expansion.initial,
                                    cfg.expansion.delta_f, options);
}

verify::VerificationReport verify_safe_controller(const PipelineConfig& cfg, const verify::IntervalBox* expansion,
                                                  std::int64_t n_samples, std::uint64_t seed) {
  cfg.validate();
  const auto safe = make_safe(cfg);
  const evasion::EvasionRolloutSource source(cfg.task, safe, safe);
  verify::ProbvOptions options{n_samples, cfg.verification.epsilon, seed, cfg.jobs};
  return verify::probv(source, expansion, evasion::make_robustness_fn(cfg.task), options);
}

verify::VerificationReport verify_learned_policy(const PipelineConfig& cfg, const rl::PolicyParams& params,
                                                 const verify::IntervalBox& expansion, std::int64_t n_samples,
                                                 std::uint64_t seed) {
  cfg.validate();
  const auto safe = make_safe(cfg);
  auto learned = std::make_shared<const rl::LearnedPolicyController>(params, cfg.task, safe, rl::ActionMask(expansion));
  const evasion::EvasionRolloutSource source(cfg.task, learned, safe);
  verify::ProbvOptions options{n_samples, cfg.verification.epsilon, seed, cfg.jobs};
  return verify::probv(source, nullptr, evasion::make_robustness_fn(cfg.task), options);
}

SeriesSummary summarize(const std::vector<double>& xs) {
  SeriesSummary s;
  s.n = static_cast<std::int64_t>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (const double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (const double x : xs) sq += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(xs.size()));
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  return s;
}

StageResult cmd_expand(const PipelineConfig& cfg) {
  const Layout layout{cfg.output_dir};
  try {
    const verify::ExpansionResult result = run_expansion(cfg);
    util::write_json_file(layout.expansion(), result);
    update_manifest(cfg, "expand",
                    {{"seed", cfg.expansion.seed},
                     {"status", result.status == verify::ExpansionStatus::kConverged ? "converged" : "max_iters"}},
                    {layout.expansion()});
    std::ostringstream msg;
    msg << "expansion set v in [" << fmt(result.expansion.lower()[0]) << ", " << fmt(result.expansion.upper()[0])
        << "], omega in [" << fmt(result.expansion.lower()[1]) << ", " << fmt(result.expansion.upper()[1])
        << "] after " << result.growth_steps << " growth steps, rho* = " << fmt(result.verified_report.rho_star);
    return {kPass, msg.str()};
  } catch (const verify::InitialSetTooLarge& e) {
    util::write_json_file(layout.expansion_failure(), e.report());
    update_manifest(cfg, "expand", {{"seed", cfg.expansion.seed}, {"status", "initial_set_too_large"}},
                    {layout.expansion_failure()});
    return {kFail, std::string(e.what()) + " (rho* = " + fmt(e.report().rho_star) + ")"};
  }
}

StageResult cmd_verify_safe(const PipelineConfig& cfg, const std::optional<fs::path>& expansion_file) {
  const Layout layout{cfg.output_dir};
  const fs::path source = resolve_expansion(cfg, expansion_file);
  const verify::ExpansionResult expansion = load_verified_expansion(source);
  const verify::VerificationReport report =
      verify_safe_controller(cfg, &expansion.expansion, cfg.verification.n_samples, cfg.verification.seed);
  verify::write_report(report, layout.safe_report(), layout.safe_samples());
  update_manifest(cfg, "verify-safe", {{"seed", cfg.verification.seed}}, {layout.safe_report(), layout.safe_samples()});
  std::ostringstream msg;
  msg << "safe controller: rho*_" << report.n_samples << " = " << fmt(report.rho_star)
      << ", confidence = " << fmt(report.confidence) << (report.passed() ? " (pass)" : " (fail)");
  return {report.passed() ? kPass : kFail, msg.str()};
}

StageResult cmd_train(const PipelineConfig& cfg, const std::optional<fs::path>& expansion_file) {
  cfg.validate();
  const Layout layout{cfg.output_dir};
  const verify::ExpansionResult expansion = load_verified_expansion(resolve_expansion(cfg, expansion_file));
  const auto safe = make_safe(cfg);
  const rl::ActionMask mask(expansion.expansion);
  const rl::TrainingResult result = rl::train(cfg.task, *safe, mask, cfg.training.config, cfg.training.seed);

  evasion::TaskConfig eval_task = cfg.task;
  eval_task.r_diff = result.r_diff;
  const rl::EvaluationResult eval = rl::evaluate_policy(result.params, eval_task, *safe, mask,
                                                        cfg.training.config.eval_episodes, cfg.training.eval_seed);

  rl::save_policy(result.params, layout.policy());
  const json sidecar = {{"format", "PSAFEPOL"},
                        {"format_version", 1},
                        {"arch", cfg.training.config.arch},
                        {"ppo", cfg.training.config.ppo},
                        {"expansion", expansion.expansion},
                        {"r_diff", result.r_diff},
                        {"seed", cfg.training.seed},
                        {"steps", result.steps},
                        {"episodes", result.episodes},
                        {"config_hash", config_hash(cfg)}};
  util::write_json_file(rl::sidecar_path(layout.policy()), sidecar);
  util::write_text_file(layout.training_log(), rl::training_log_csv(result.log));
  util::write_json_file(layout.evaluation(), {{"episodes", eval.returns.size()},
                                              {"seed", cfg.training.eval_seed},
                                              {"deterministic", true},
                                              {"mean_return", eval.mean_return},
                                              {"std_return", eval.std_return},
                                              {"mean_action_diff", eval.mean_action_diff},
                                              {"returns", eval.returns},
                                              {"containment_checks", result.containment_checks + eval.containment_checks},
                                              {"containment_violations", 0}});
  update_manifest(cfg, "train", {{"seed", cfg.training.seed}, {"eval_seed", cfg.training.eval_seed}},
                  {layout.policy(), rl::sidecar_path(layout.policy()), layout.training_log(), layout.evaluation()});
  std::ostringstream msg;
  msg << "trained " << result.steps << " steps (" << result.episodes << " episodes), evaluation mean return "
      << fmt(eval.mean_return) << " over " << eval.returns.size() << " episodes";
  return {kPass, msg.str()};
}

namespace {

struct LoadedPolicy {
  rl::PolicyParams params;
  verify::IntervalBox expansion;
};

LoadedPolicy load_policy_with_sidecar(const fs::path& path) {
  LoadedPolicy out;
  out.params = rl::load_policy(path);
  const fs::path side = rl::sidecar_path(path);
  if (!fs::exists(side)) throw rl::PolicyFormatError("missing policy sidecar " + side.string());
  try {
    out.expansion = util::read_json_file(side).at("expansion").get<verify::IntervalBox>();
  } catch (const std::exception& e) {
    throw rl::PolicyFormatError("invalid policy sidecar " + side.string() + ": " + e.what());
  }
  return out;
}

}  // namespace

StageResult cmd_verify_agent(const PipelineConfig& cfg, const std::optional<fs::path>& policy_file) {
  const Layout layout{cfg.output_dir};
  const fs::path path = policy_file.value_or(layout.policy());
  const LoadedPolicy policy = load_policy_with_sidecar(path);
  const verify::VerificationReport report =
      verify_learned_policy(cfg, policy.params, policy.expansion, cfg.verification.n_samples, cfg.verification.seed);
  verify::write_report(report, layout.agent_report(), layout.agent_samples());
  update_manifest(cfg, "verify-agent",
                  {{"seed", cfg.verification.seed},
                   {"policy_hash", util::hex64(util::fnv1a64(util::read_text_file(path)))}},
                  {layout.agent_report(), layout.agent_samples()});
  std::ostringstream msg;
  msg << "learned agent: rho*_" << report.n_samples << " = " << fmt(report.rho_star)
      << ", confidence = " << fmt(report.confidence) << (report.passed() ? " (pass)" : " (fail)");
  return {report.passed() ? kPass : kFail, msg.str()};
}

StageResult cmd_histogram(const PipelineConfig& cfg, const std::optional<fs::path>& policy_file,
                          const std::optional<fs::path>& expansion_file) {
  const Layout layout{cfg.output_dir};
  const std::int64_t n = cfg.histogram.n_samples;
  const std::uint64_t seed = cfg.histogram.seed;

  std::vector<std::pair<std::string, verify::VerificationReport>> series;
  series.emplace_back("safe_deterministic", verify_safe_controller(cfg, nullptr, n, seed));

  const fs::path expansion_path = resolve_expansion(cfg, expansion_file);
  if (expansion_file || fs::exists(expansion_path)) {
    const verify::ExpansionResult expansion = load_verified_expansion(expansion_path);
    series.emplace_back("safe_perturbed", verify_safe_controller(cfg, &expansion.expansion, n, seed));
  }
  const fs::path policy_path = policy_file.value_or(layout.policy());
  if (policy_file || fs::exists(policy_path)) {
    const LoadedPolicy policy = load_policy_with_sidecar(policy_path);
    series.emplace_back("learned", verify_learned_policy(cfg, policy.params, policy.expansion, n, seed));
  }

  std::string csv = "series,sample_index,seed,robustness\n";
  json summary = json::object();
  for (const auto& [name, report] : series) {
    for (std::size_t i = 0; i < report.robustnesses.size(); ++i) {
      csv += name + ',' + std::to_string(i) + ',' + std::to_string(report.sample_seeds[i]) + ',' +
             fmt(report.robustnesses[i]) + '\n';
    }
    summary[name] = summary_json(summarize(report.robustnesses));
  }
  const json doc = {{"seed", seed},
                    {"n_samples", n},
                    {"series", summary},
                    {"reference_values",
                     {{"learned", {{"mean", 0.78}, {"std", 0.32}}},
                      {"safe_deterministic", {{"mean", 0.76}, {"std", 0.35}}}}}};
  util::write_text_file(layout.histogram_samples(), csv);
  util::write_json_file(layout.histogram_summary(), doc);
  update_manifest(cfg, "histogram", {{"seed", seed}}, {layout.histogram_samples(), layout.histogram_summary()});

  std::ostringstream msg;
  for (const auto& [name, report] : series) {
    const SeriesSummary s = summarize(report.robustnesses);
    msg << name << ": mean " << fmt(s.mean) << ", std " << fmt(s.std) << "; ";
  }
  std::string text = msg.str();
  if (text.size() >= 2) text.resize(text.size() - 2);
  return {kPass, text};
}

}  // namespace probsafe::pipeline
