#include "probsafe/verify/expansion.hpp"

#include <nlohmann/json.hpp>

namespace probsafe::verify {

InitialSetTooLarge::InitialSetTooLarge(VerificationReport report)
    : std::runtime_error("initial expansion set is too large to verify (rho* = " +
                         std::to_string(report.rho_star) + "); reduce it"),
      report_(std::move(report)) {}

std::uint64_t expansion_attempt_seed(std::uint64_t base_seed, int attempt) {
  return util::derive_seed(base_seed ^ 0x45585041ULL, static_cast<std::uint64_t>(attempt));
}

namespace {

IntervalBox grown(const IntervalBox& e_init, const std::vector<double>& delta_f, int i) {
  std::vector<double> factors(delta_f.size());
  for (std::size_t a = 0; a < factors.size(); ++a) factors[a] = 1.0 + static_cast<double>(i) * delta_f[a];
  return e_init.scaled(factors);
}

}  // namespace

ExpansionResult find_expansion_set(const RolloutSource& source, const RobustnessFn& robustness_fn,
                                   const IntervalBox& e_init, const std::vector<double>& delta_f,
                                   const ExpansionOptions& options) {
  if (delta_f.size() != e_init.dimension()) throw std::invalid_argument("delta_f dimension mismatch");
  for (const double d : delta_f) {
    if (!(d >= 0.0)) throw std::invalid_argument("delta_f must be >= 0 componentwise");
  }
  if (options.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");

  ExpansionResult result;
  auto verify_box = [&](const IntervalBox& box, int attempt) {
    ProbvOptions po = options.probv;
    po.base_seed = expansion_attempt_seed(options.probv.base_seed, attempt);
    VerificationReport report = probv(source, &box, robustness_fn, po);
    result.history.push_back({box, po.base_seed, report.rho_star});
    return report;
  };

  VerificationReport report = verify_box(e_init, 0);
  if (!report.passed()) throw InitialSetTooLarge(std::move(report));

  IntervalBox verified = e_init;
  VerificationReport verified_report = report;
  int i = 1;
  while (report.passed()) {
    verified = grown(e_init, delta_f, i - 1);
    verified_report = report;
    if (i > options.max_iters) {
      result.status = ExpansionStatus::kMaxItersReached;
      break;
    }
    report = verify_box(grown(e_init, delta_f, i), i);
    ++i;
  }

  result.expansion = verified;
  result.growth_steps = static_cast<int>(result.history.size()) - 1;
  result.verified_seed = verified_report.base_seed;
  result.verified_report = std::move(verified_report);
  return result;
}

void to_json(nlohmann::json& j, const ExpansionResult& r) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& a : r.history) {
    history.push_back({{"box", a.box}, {"seed", a.seed}, {"rho_star", a.rho_star}});
  }
  j = nlohmann::json{
      {"expansion", r.expansion},
      {"status", r.status == ExpansionStatus::kConverged ? "converged" : "max_iters_reached"},
      {"growth_steps", r.growth_steps},
      {"verified_seed", r.verified_seed},
      {"rho_star", r.verified_report.rho_star},
      {"verified_report", r.verified_report},
      {"history", history},
  };
}

void from_json(const nlohmann::json& j, ExpansionResult& r) {
  r.expansion = j.at("expansion").get<IntervalBox>();
  r.status = j.at("status").get<std::string>() == "converged" ? ExpansionStatus::kConverged
                                                              : ExpansionStatus::kMaxItersReached;
  r.growth_steps = j.at("growth_steps").get<int>();
  r.verified_seed = j.at("verified_seed").get<std::uint64_t>();
  r.verified_report = j.at("verified_report").get<VerificationReport>();
  r.history.clear();
  for (const auto& a : j.at("history")) {
    r.history.push_back({a.at("box").get<IntervalBox>(), a.at("seed").get<std::uint64_t>(),
                         a.at("rho_star").get<double>()});
  }
}

}  // namespace probsafe::verify
