#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "probsafe/stl/formula.hpp"
#include "probsafe/stl/signal.hpp"

namespace probsafe::stl {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step offsets {j : lo <= j*dt <= hi} covered by a time window, with a
/// 1e-9 relative slack so that e.g. 3 * 0.1 still lands inside [0, 0.3].
struct StepWindow {
  std::size_t first = 0;
  std::size_t last = 0;  ///< SIZE_MAX for an unbounded window.
};
StepWindow step_window(const Interval& window, double dt);

/// Discrete-time monitor for a fixed formula and predicate table.
///
/// Semantics over a finite signal s_0..s_K:
///   rho(p, k)        = h_p(s_k)
///   rho(!f, k)       = -rho(f, k)
///   rho(f | g, k)    = max(rho(f, k), rho(g, k))
///   rho(f U[a,b] g, k) = max over k' in W(k) of
///                        min(rho(g, k'), min over k'' in [k, k') of rho(f, k''))
/// with W(k) the window clipped to the end of the signal: steps past K
/// contribute nothing (an empty max is -inf). true/false are +inf/-inf.
///
/// Boolean satisfaction is computed by a separate pass with the same
/// structure, not by thresholding robustness. The two agree except where a
/// predicate evaluates to exactly 0 beneath a negation.
class Monitor {
 public:
  /// Throws EvaluationError if a predicate of `formula` is not in `table`.
  Monitor(const Formula& formula, PredicateTable table);

  const Formula& formula() const noexcept { return formula_; }
  const Formula& core() const noexcept { return core_; }

  std::vector<double> robustness_trace(const Signal& s) const;
  std::vector<bool> satisfaction_trace(const Signal& s) const;

  /// Throws std::out_of_range when k is past the end of the signal.
  double robustness(const Signal& s, std::size_t k = 0) const;
  bool satisfies(const Signal& s, std::size_t k = 0) const;

 private:
  Formula formula_;
  Formula core_;
  PredicateTable table_;
};

double robustness(const Formula& f, const Signal& s, std::size_t k, const PredicateTable& table);
bool satisfies(const Formula& f, const Signal& s, std::size_t k, const PredicateTable& table);

}  // namespace probsafe::stl
