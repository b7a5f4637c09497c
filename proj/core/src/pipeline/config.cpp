#include "probsafe/pipeline/config.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

#include "probsafe/util/io.hpp"

namespace probsafe::pipeline {

void PipelineConfig::validate() const {
  task.validate();
  controller.validate(task);
  if (verification.n_samples < 1) throw std::invalid_argument("verification.n_samples must be >= 1");
  if (!(verification.epsilon >= 0.0 && verification.epsilon <= 1.0)) {
    throw std::invalid_argument("verification.epsilon must lie in [0, 1]");
  }
  if (expansion.initial.dimension() != 2) throw std::invalid_argument("expansion.initial must be 2-D");
  if (!expansion.initial.contains_origin()) throw std::invalid_argument("expansion.initial must contain 0");
  if (expansion.delta_f.size() != 2) throw std::invalid_argument("expansion.delta_f must have 2 entries");
  for (const double f : expansion.delta_f) {
    if (!(f >= 0.0)) throw std::invalid_argument("expansion.delta_f entries must be >= 0");
  }
  if (expansion.max_iters < 1) throw std::invalid_argument("expansion.max_iters must be >= 1");
  training.config.validate();
  if (histogram.n_samples < 1) throw std::invalid_argument("histogram.n_samples must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
}

void to_json(nlohmann::json& j, const PipelineConfig& c) {
  j = {{"task", c.task},
       {"controller", c.controller},
       {"verification", {{"n_samples", c.verification.n_samples},
                         {"epsilon", c.verification.epsilon},
                         {"seed", c.verification.seed}}},
       {"expansion", {{"initial", c.expansion.initial},
                      {"delta_f", c.expansion.delta_f},
                      {"max_iters", c.expansion.max_iters},
                      {"seed", c.expansion.seed}}},
       {"training", {{"config", c.training.config}, {"seed", c.training.seed}, {"eval_seed", c.training.eval_seed}}},
       {"histogram", {{"n_samples", c.histogram.n_samples}, {"seed", c.histogram.seed}}},
       {"output_dir", c.output_dir.string()},
       {"jobs", c.jobs}};
}

void from_json(const nlohmann::json& j, PipelineConfig& c) {
  if (!j.is_object()) throw std::invalid_argument("pipeline config must be a JSON object");
  if (j.contains("task")) c.task = j.at("task").get<evasion::TaskConfig>();
  if (j.contains("controller")) c.controller = j.at("controller").get<control::SafeControllerConfig>();
  if (j.contains("verification")) {
    const auto& v = j.at("verification");
    c.verification.n_samples = v.value("n_samples", c.verification.n_samples);
    c.verification.epsilon = v.value("epsilon", c.verification.epsilon);
    c.verification.seed = v.value("seed", c.verification.seed);
  }
  if (j.contains("expansion")) {
    const auto& e = j.at("expansion");
    if (e.contains("initial")) c.expansion.initial = e.at("initial").get<verify::IntervalBox>();
    c.expansion.delta_f = e.value("delta_f", c.expansion.delta_f);
    c.expansion.max_iters = e.value("max_iters", c.expansion.max_iters);
    c.expansion.seed = e.value("seed", c.expansion.seed);
  }
  if (j.contains("training")) {
    const auto& t = j.at("training");
    if (t.contains("config")) c.training.config = t.at("config").get<rl::TrainingConfig>();
    c.training.seed = t.value("seed", c.training.seed);
    c.training.eval_seed = t.value("eval_seed", c.training.eval_seed);
  }
  if (j.contains("histogram")) {
    const auto& h = j.at("histogram");
    c.histogram.n_samples = h.value("n_samples", c.histogram.n_samples);
    c.histogram.seed = h.value("seed", c.histogram.seed);
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  c.jobs = j.value("jobs", c.jobs);
  c.validate();
}

PipelineConfig load_config(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = util::read_json_file(path);
  } catch (const std::exception& e) {
    throw std::invalid_argument("cannot read config " + path.string() + ": " + e.what());
  }
  try {
    return doc.get<PipelineConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("invalid config " + path.string() + ": " + e.what());
  }
}

std::string default_config_text() { return nlohmann::json(PipelineConfig{}).dump(2) + "\n"; }

std::string config_hash(const PipelineConfig& cfg) {
  return util::hex64(util::fnv1a64(nlohmann::json(cfg).dump()));
}

}  // namespace probsafe::pipeline
