#include "probsafe/stl/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace probsafe::stl {

StepWindow step_window(const Interval& window, double dt) {
  constexpr double kSlack = 1e-9;
  StepWindow w;
  const double first = std::ceil(window.lo / dt - kSlack);
  w.first = first <= 0.0 ? 0 : static_cast<std::size_t>(first);
  if (std::isinf(window.hi)) {
    w.last = std::numeric_limits<std::size_t>::max();
  } else {
    const double last = std::floor(window.hi / dt + kSlack);
    w.last = last < 0.0 ? 0 : static_cast<std::size_t>(last);
  }
  return w;
}

namespace {

void check_predicates(const Formula& f, const PredicateTable& table) {
  if (f.op() == Op::kPredicate) {
    if (!table.contains(f.name())) throw EvaluationError("unresolved predicate '" + f.name() + "'");
    return;
  }
  if (f.is_unary() || f.is_binary()) check_predicates(f.lhs(), table);
  if (f.is_binary()) check_predicates(f.rhs(), table);
}

// Clipped upper index of the window starting at k, or -1 if empty.
std::ptrdiff_t window_end(std::size_t k, const StepWindow& w, std::size_t n) {
  const std::size_t remaining = n - 1 - k;
  return static_cast<std::ptrdiff_t>(k + std::min(w.last, remaining));
}

std::vector<double> eval_real(const Formula& f, const Signal& s, const PredicateTable& table) {
  const std::size_t n = s.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (f.op()) {
    case Op::kTrue: return std::vector<double>(n, inf);
    case Op::kFalse: return std::vector<double>(n, -inf);
    case Op::kPredicate: {
      const PredicateFn& h = table.get(f.name());
      std::vector<double> out(n);
      for (std::size_t k = 0; k < n; ++k) out[k] = h(s.state(k));
      return out;
    }
    case Op::kNot: {
      std::vector<double> out = eval_real(f.lhs(), s, table);
      for (double& v : out) v = -v;
      return out;
    }
    case Op::kOr: {
      std::vector<double> out = eval_real(f.lhs(), s, table);
      const std::vector<double> rhs = eval_real(f.rhs(), s, table);
      for (std::size_t k = 0; k < n; ++k) out[k] = std::max(out[k], rhs[k]);
      return out;
    }
    case Op::kUntil: {
      const std::vector<double> lhs = eval_real(f.lhs(), s, table);
      const std::vector<double> rhs = eval_real(f.rhs(), s, table);
      const StepWindow w = step_window(f.interval(), s.dt());
      std::vector<double> out(n, -inf);
      for (std::size_t k = 0; k < n; ++k) {
        const std::ptrdiff_t end = window_end(k, w, n);
        double prefix = inf;  // min of lhs over [k, j)
        double best = -inf;
        for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(k); j <= end; ++j) {
          const auto uj = static_cast<std::size_t>(j);
          if (uj - k >= w.first) best = std::max(best, std::min(rhs[uj], prefix));
          prefix = std::min(prefix, lhs[uj]);
          if (prefix <= best) break;  // later candidates cannot exceed best
        }
        out[k] = best;
      }
      return out;
    }
    default: throw std::logic_error("monitor expects a desugared formula");
  }
}

std::vector<bool> eval_bool(const Formula& f, const Signal& s, const PredicateTable& table) {
  const std::size_t n = s.size();
  switch (f.op()) {
    case Op::kTrue: return std::vector<bool>(n, true);
    case Op::kFalse: return std::vector<bool>(n, false);
    case Op::kPredicate: {
      const PredicateFn& h = table.get(f.name());
      std::vector<bool> out(n);
      for (std::size_t k = 0; k < n; ++k) out[k] = h(s.state(k)) >= 0.0;
      return out;
    }
    case Op::kNot: {
      std::vector<bool> out = eval_bool(f.lhs(), s, table);
      out.flip();
      return out;
    }
    case Op::kOr: {
      std::vector<bool> out = eval_bool(f.lhs(), s, table);
      const std::vector<bool> rhs = eval_bool(f.rhs(), s, table);
      for (std::size_t k = 0; k < n; ++k) out[k] = out[k] || rhs[k];
      return out;
    }
    case Op::kUntil: {
      const std::vector<bool> lhs = eval_bool(f.lhs(), s, table);
      const std::vector<bool> rhs = eval_bool(f.rhs(), s, table);
      const StepWindow w = step_window(f.interval(), s.dt());
      std::vector<bool> out(n, false);
      for (std::size_t k = 0; k < n; ++k) {
        const std::ptrdiff_t end = window_end(k, w, n);
        for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(k); j <= end; ++j) {
          const auto uj = static_cast<std::size_t>(j);
          if (uj - k >= w.first && rhs[uj]) {
            out[k] = true;
            break;
          }
          if (!lhs[uj]) break;
        }
      }
      return out;
    }
    default: throw std::logic_error("monitor expects a desugared formula");
  }
}

void check_index(const Signal& s, std::size_t k) {
  if (k >= s.size()) {
    throw std::out_of_range("step index " + std::to_string(k) + " out of range for signal of " +
                            std::to_string(s.size()) + " states");
  }
}

}  // namespace

Monitor::Monitor(const Formula& formula, PredicateTable table)
    : formula_(formula), core_(desugar(formula)), table_(std::move(table)) {
  check_predicates(core_, table_);
}

std::vector<double> Monitor::robustness_trace(const Signal& s) const {
  if (s.empty()) return {};
  return eval_real(core_, s, table_);
}

std::vector<bool> Monitor::satisfaction_trace(const Signal& s) const {
  if (s.empty()) return {};
  return eval_bool(core_, s, table_);
}

double Monitor::robustness(const Signal& s, std::size_t k) const {
  check_index(s, k);
  return robustness_trace(s)[k];
}

bool Monitor::satisfies(const Signal& s, std::size_t k) const {
  check_index(s, k);
  return satisfaction_trace(s)[k];
}

double robustness(const Formula& f, const Signal& s, std::size_t k, const PredicateTable& table) {
  return Monitor(f, table).robustness(s, k);
}

bool satisfies(const Formula& f, const Signal& s, std::size_t k, const PredicateTable& table) {
  return Monitor(f, table).satisfies(s, k);
}

}  // namespace probsafe::stl
