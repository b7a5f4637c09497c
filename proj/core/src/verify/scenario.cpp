#include "probsafe/verify/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "probsafe/util/io.hpp"
#include "probsafe/verify/confidence.hpp"

namespace probsafe::verify {

RolloutFailure::RolloutFailure(std::size_t sample_index, std::uint64_t seed, const std::string& reason)
    : std::runtime_error("rollout " + std::to_string(sample_index) + " (seed " + std::to_string(seed) +
                         ") failed: " + reason),
      sample_index_(sample_index),
      seed_(seed) {}

void VerificationReport::check_invariants() const {
  if (n_samples < 1) throw std::logic_error("report has no samples");
  if (robustnesses.size() != static_cast<std::size_t>(n_samples)) {
    throw std::logic_error("report robustness count differs from n_samples");
  }
  if (rho_star != *std::min_element(robustnesses.begin(), robustnesses.end())) {
    throw std::logic_error("report rho_star is not the sample minimum");
  }
  if (confidence != verify::confidence(epsilon, n_samples)) {
    throw std::logic_error("report confidence does not match 1-(1-eps)^N");
  }
}

void to_json(nlohmann::json& j, const VerificationReport& r) {
  j = nlohmann::json{
      {"rho_star", r.rho_star},
      {"passed", r.passed()},
      {"epsilon", r.epsilon},
      {"n_samples", r.n_samples},
      {"confidence", r.confidence},
      {"base_seed", r.base_seed},
      {"robustnesses", r.robustnesses},
      {"sample_seeds", r.sample_seeds},
      {"param_names", r.param_names},
      {"per_sample_params", r.per_sample_params},
  };
  j["expansion"] = r.expansion ? nlohmann::json(*r.expansion) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, VerificationReport& r) {
  r.rho_star = j.at("rho_star").get<double>();
  r.epsilon = j.at("epsilon").get<double>();
  r.n_samples = j.at("n_samples").get<std::int64_t>();
  r.confidence = j.at("confidence").get<double>();
  r.base_seed = j.at("base_seed").get<std::uint64_t>();
  r.robustnesses = j.at("robustnesses").get<std::vector<double>>();
  r.sample_seeds = j.value("sample_seeds", std::vector<std::uint64_t>{});
  r.param_names = j.value("param_names", std::vector<std::string>{});
  r.per_sample_params = j.value("per_sample_params", std::vector<std::vector<double>>{});
  if (j.contains("expansion") && !j.at("expansion").is_null()) {
    r.expansion = j.at("expansion").get<IntervalBox>();
  } else {
    r.expansion.reset();
  }
}

std::string report_samples_csv(const VerificationReport& r) {
  std::ostringstream out;
  out << "sample_index,seed,robustness";
  for (const auto& name : r.param_names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < r.robustnesses.size(); ++i) {
    out << i << ',' << r.sample_seeds.at(i) << ',' << util::format_double(r.robustnesses[i]);
    for (const double p : r.per_sample_params.at(i)) out << ',' << util::format_double(p);
    out << '\n';
  }
  return out.str();
}

void write_report(const VerificationReport& report, const std::filesystem::path& json_path,
                  const std::filesystem::path& csv_path) {
  util::write_json_file(json_path, report);
  util::write_text_file(csv_path, report_samples_csv(report));
}

VerificationReport probv(const RolloutSource& source, const IntervalBox* expansion,
                         const RobustnessFn& robustness_fn, const ProbvOptions& options) {
  if (options.n_samples < 1) throw std::domain_error("probv needs at least one sample");
  VerificationReport report;
  report.epsilon = options.epsilon;
  report.n_samples = options.n_samples;
  report.confidence = confidence(options.epsilon, options.n_samples);
  report.base_seed = options.base_seed;
  report.param_names = source.initial_condition_names();
  if (expansion) report.expansion = *expansion;

  const auto n = static_cast<std::size_t>(options.n_samples);
  report.robustnesses.assign(n, 0.0);
  report.sample_seeds.resize(n);
  report.per_sample_params.resize(n);
  for (std::size_t i = 0; i < n; ++i) report.sample_seeds[i] = util::derive_seed(options.base_seed, i);

  auto run_sample = [&](std::size_t i) {
    const std::uint64_t seed = report.sample_seeds[i];
    // Catch per sample so the error names the offending stream.
    try {
      util::Rng rng(seed);
      std::vector<double> ic = source.sample_initial_condition(rng);
      const stl::Signal trace = source.rollout(ic, expansion, rng);
      if (!trace.all_finite()) throw std::runtime_error("non-finite state in trajectory");
      const double rho = robustness_fn(trace);
      if (std::isnan(rho)) throw std::runtime_error("robustness is NaN");
      report.robustnesses[i] = rho;
      report.per_sample_params[i] = std::move(ic);
    } catch (const RolloutFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw RolloutFailure(i, seed, e.what());
    }
  };

  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(n)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) run_sample(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::size_t first_error_index = n;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          try {
            run_sample(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            // Report the lowest failing index, as a sequential run would.
            if (i < first_error_index) {
              first_error_index = i;
              first_error = std::current_exception();
            }
          }
        }
      });
    }
    for (auto& t : workers) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  report.rho_star = *std::min_element(report.robustnesses.begin(), report.robustnesses.end());
  return report;
}

}  // namespace probsafe::verify
