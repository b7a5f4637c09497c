#pragma once

#include <limits>
#include <memory>
#include <string>

namespace probsafe::stl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Closed time interval [lo, hi] in seconds; hi may be +inf.
struct Interval {
  double lo = 0.0;
  double hi = kInfinity;

  /// Throws std::invalid_argument unless 0 <= lo <= hi and lo is finite.
  static Interval checked(double lo, double hi);
  static Interval unbounded() { return {0.0, kInfinity}; }

  bool operator==(const Interval&) const = default;
};

enum class Op {
  kTrue,
  kFalse,
  kPredicate,
  kNot,
  kOr,
  kUntil,
  // Derived operators. Stored explicitly so printing preserves what was
  // written; evaluation goes through desugar().
  kAnd,
  kImplies,
  kEventually,
  kAlways,
};

/// Immutable STL formula. Copies share structure.
class Formula {
 public:
  static Formula top();
  static Formula bottom();
  static Formula predicate(std::string name);

  Op op() const noexcept;
  /// Predicate name. Empty for every other operator.
  const std::string& name() const noexcept;
  /// Operand of unary operators, left operand of binary ones.
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Interval& interval() const;

  bool is_temporal() const noexcept;
  bool is_binary() const noexcept;
  bool is_unary() const noexcept;
  bool is_core() const noexcept;
  int depth() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend Formula make_unary(Op, Formula, Interval);
  friend Formula make_binary(Op, Formula, Formula, Interval);
};

Formula negate(Formula f);
Formula disjunction(Formula a, Formula b);
Formula conjunction(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula until(Formula a, Formula b, Interval window);
Formula eventually(Formula f, Interval window = Interval::unbounded());
Formula always(Formula f, Interval window = Interval::unbounded());

/// Rewrites derived operators into {true, false, predicate, !, |, U}:
///   a & b  -> !(!a | !b)
///   a => b -> !a | b
///   F[I] a -> true U[I] a
///   G[I] a -> !F[I] !a
Formula desugar(const Formula& f);

/// Fully parenthesised concrete syntax accepted by parse_formula().
std::string to_string(const Formula& f);

}  // namespace probsafe::stl
