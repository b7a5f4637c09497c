#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "probsafe/pipeline/config.hpp"
#include "probsafe/pipeline/stages.hpp"

namespace fs = std::filesystem;
using namespace probsafe;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> jobs;
  std::optional<std::int64_t> steps;
  std::optional<std::int64_t> n;
  std::string expansion;
  std::string policy;
};

pipeline::PipelineConfig resolve(const Options& o, const std::string& stage) {
  pipeline::PipelineConfig cfg = o.config.empty() ? pipeline::PipelineConfig{} : pipeline::load_config(o.config);
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (o.steps) cfg.training.config.total_steps = *o.steps;
  if (o.n) cfg.histogram.n_samples = *o.n;
  if (o.seed) {
    if (stage == "expand") cfg.expansion.seed = *o.seed;
    if (stage == "verify-safe" || stage == "verify-agent") cfg.verification.seed = *o.seed;
    if (stage == "train") cfg.training.seed = *o.seed;
    if (stage == "histogram") cfg.histogram.seed = *o.seed;
  }
  cfg.validate();
  return cfg;
}

std::optional<fs::path> path_or_none(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistically safe reinforcement learning pipeline for the evasion task"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "pipeline config JSON")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "seed of this stage");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* expand = app.add_subcommand("expand", "grow and verify the expansion set around the safe controller");
  common(expand);
  auto* verify_safe = app.add_subcommand("verify-safe", "verify the safe controller perturbed within the expansion set");
  common(verify_safe);
  verify_safe->add_option("--expansion", o.expansion, "expansion result JSON");
  auto* train = app.add_subcommand("train", "train the masked PPO agent");
  common(train);
  train->add_option("--steps", o.steps, "total environment steps")->check(CLI::PositiveNumber);
  train->add_option("--expansion", o.expansion, "expansion result JSON");
  auto* verify_agent = app.add_subcommand("verify-agent", "verify the deterministic learned policy");
  common(verify_agent);
  verify_agent->add_option("--policy", o.policy, "policy file");
  auto* histogram = app.add_subcommand("histogram", "robustness samples of safe, perturbed and learned controllers");
  common(histogram);
  histogram->add_option("-n,--samples", o.n, "samples per series")->check(CLI::PositiveNumber);
  histogram->add_option("--policy", o.policy, "policy file");
  histogram->add_option("--expansion", o.expansion, "expansion result JSON");
  auto* print_config = app.add_subcommand("print-config", "print the default configuration");
  print_config->add_option("--config", o.config, "print this config with defaults filled in")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pipeline::kError;
  }

  try {
    if (print_config->parsed()) {
      if (o.config.empty()) {
        std::cout << pipeline::default_config_text();
      } else {
        std::cout << nlohmann::json(pipeline::load_config(o.config)).dump(2) << "\n";
      }
      return pipeline::kPass;
    }
    pipeline::StageResult result;
    if (expand->parsed()) {
      result = pipeline::cmd_expand(resolve(o, "expand"));
    } else if (verify_safe->parsed()) {
      result = pipeline::cmd_verify_safe(resolve(o, "verify-safe"), path_or_none(o.expansion));
    } else if (train->parsed()) {
      result = pipeline::cmd_train(resolve(o, "train"), path_or_none(o.expansion));
    } else if (verify_agent->parsed()) {
      result = pipeline::cmd_verify_agent(resolve(o, "verify-agent"), path_or_none(o.policy));
    } else if (histogram->parsed()) {
      result = pipeline::cmd_histogram(resolve(o, "histogram"), path_or_none(o.policy), path_or_none(o.expansion));
    }
    (result.exit_code == pipeline::kPass ? std::cout : std::cerr) << result.message << "\n";
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pipeline::kError;
  }
}
