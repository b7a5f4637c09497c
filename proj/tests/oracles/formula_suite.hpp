#pragma once

// Exhaustive STL formula enumeration over two predicates and the soundness
// check shared by the monitor unit tests and the acceptance suite.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "probsafe/stl/formula.hpp"
#include "probsafe/stl/monitor.hpp"
#include "probsafe/stl/signal.hpp"
#include "probsafe/util/random.hpp"
#include "stl_oracle.hpp"

namespace oracle {

using probsafe::stl::Interval;

inline constexpr double kSuiteDt = 0.1;

/// Operators applied when growing the suite. Windows are in seconds at
/// kSuiteDt and include empty-at-the-end and unbounded cases.
inline std::vector<Formula> apply_unary(const Formula& f) {
  using namespace probsafe::stl;
  return {negate(f), eventually(f, Interval::checked(0.0, 0.2)), always(f, Interval::checked(0.1, 0.3)),
          eventually(f)};
}

inline std::vector<Formula> apply_binary(const Formula& a, const Formula& b) {
  using namespace probsafe::stl;
  return {disjunction(a, b), conjunction(a, b), implies(a, b), until(a, b, Interval::checked(0.0, 0.3)),
          until(a, b, Interval::checked(0.2, kInfinity))};
}

/// Every formula of depth <= `depth` (atoms have depth 1).
inline std::vector<Formula> enumerate_formulas(int depth) {
  std::vector<Formula> all{Formula::predicate("p"), Formula::predicate("q")};
  for (int d = 2; d <= depth; ++d) {
    const std::vector<Formula> prev = all;
    std::vector<Formula> next = prev;
    for (const auto& f : prev) {
      if (f.depth() != d - 1) continue;
      for (auto& g : apply_unary(f)) next.push_back(std::move(g));
    }
    for (const auto& a : prev) {
      for (const auto& b : prev) {
        if (std::max(a.depth(), b.depth()) != d - 1) continue;
        for (auto& g : apply_binary(a, b)) next.push_back(std::move(g));
      }
    }
    all = std::move(next);
  }
  return all;
}

/// Depth-4 formulas: each operator on top of every depth-3 formula, with
/// a predicate as the other operand of a binary operator (both sides).
inline std::vector<Formula> depth4_layer(const std::vector<Formula>& up_to_3) {
  std::vector<Formula> out;
  const Formula atoms[2] = {Formula::predicate("p"), Formula::predicate("q")};
  for (const auto& f : up_to_3) {
    if (f.depth() != 3) continue;
    for (auto& g : apply_unary(f)) out.push_back(std::move(g));
    for (const auto& a : atoms) {
      for (auto& g : apply_binary(f, a)) out.push_back(std::move(g));
      for (auto& g : apply_binary(a, f)) out.push_back(std::move(g));
    }
  }
  return out;
}

/// Two-component signals, length 1..max_len, values uniform in [-2, 2].
inline std::vector<Signal> random_signals(std::size_t count, std::size_t max_len, std::uint64_t seed) {
  probsafe::util::Rng rng(seed);
  std::vector<Signal> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto len = 1 + static_cast<std::size_t>(rng.uniform(0.0, 1.0) * static_cast<double>(max_len));
    Signal s(2, kSuiteDt);
    for (std::size_t k = 0; k < std::min(len, max_len); ++k) {
      const double row[2] = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
      s.push_back(row);
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline probsafe::stl::PredicateTable suite_predicates() {
  probsafe::stl::PredicateTable t;
  t.add("p", [](std::span<const double> x) { return x[0]; });
  t.add("q", [](std::span<const double> x) { return x[1]; });
  return t;
}

struct SoundnessResult {
  std::size_t formulas = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

/// For every formula, signal and time step: robustness >= 0 iff satisfied,
/// and both equal the brute-force oracle. `stride` > 1 evaluates each
/// formula on every stride-th signal, rotating the starting offset.
inline void check_soundness(const std::vector<Formula>& formulas, const std::vector<Signal>& signals,
                            SoundnessResult& result, std::size_t stride = 1) {
  const auto table = suite_predicates();
  for (std::size_t fi = 0; fi < formulas.size(); ++fi) {
    const Formula& f = formulas[fi];
    const probsafe::stl::Monitor monitor(f, table);
    ++result.formulas;
    for (std::size_t si = fi % stride; si < signals.size(); si += stride) {
      const Signal& s = signals[si];
      const std::vector<double> rob = monitor.robustness_trace(s);
      const std::vector<bool> sat = monitor.satisfaction_trace(s);
      BruteForce bf(s, {{"p", 0}, {"q", 1}});
      for (std::size_t k = 0; k < s.size(); ++k) {
        ++result.checks;
        const double expected = bf.robustness(f, k);
        const bool expected_sat = bf.satisfied(f, k);
        const bool same_rob = rob[k] == expected;
        const bool ok = same_rob && sat[k] == expected_sat && (rob[k] >= 0.0) == sat[k];
        if (!ok) {
          if (result.failures == 0) {
            result.first_failure = probsafe::stl::to_string(f) + " on signal " + std::to_string(si) + " at k=" +
                                   std::to_string(k) + ": monitor " + std::to_string(rob[k]) + "/" +
                                   std::to_string(sat[k]) + ", oracle " + std::to_string(expected) + "/" +
                                   std::to_string(expected_sat);
          }
          ++result.failures;
        }
      }
    }
  }
}

}  // namespace oracle
