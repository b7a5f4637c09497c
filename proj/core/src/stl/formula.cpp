#include "probsafe/stl/formula.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "probsafe/util/io.hpp"

namespace probsafe::stl {

struct Formula::Node {
  Op op;
  std::string name;
  std::vector<Formula> children;
  Interval window;
  int depth = 1;
};

Interval Interval::checked(double lo, double hi) {
  if (!(lo >= 0.0) || !std::isfinite(lo)) {
    throw std::invalid_argument("interval lower bound must be finite and >= 0, got " +
                                util::format_double(lo));
  }
  if (!(hi >= lo)) {
    throw std::invalid_argument("interval upper bound " + util::format_double(hi) +
                                " is below lower bound " + util::format_double(lo));
  }
  return {lo, hi};
}

Formula Formula::top() { return Formula(std::make_shared<const Node>(Node{Op::kTrue, {}, {}, {}, 1})); }

Formula Formula::bottom() {
  return Formula(std::make_shared<const Node>(Node{Op::kFalse, {}, {}, {}, 1}));
}

Formula Formula::predicate(std::string name) {
  if (name.empty()) throw std::invalid_argument("predicate name must be non-empty");
  return Formula(std::make_shared<const Node>(Node{Op::kPredicate, std::move(name), {}, {}, 1}));
}

Op Formula::op() const noexcept { return node_->op; }
const std::string& Formula::name() const noexcept { return node_->name; }
int Formula::depth() const noexcept { return node_->depth; }

const Formula& Formula::lhs() const {
  if (node_->children.empty()) throw std::logic_error("formula has no operand");
  return node_->children.front();
}

const Formula& Formula::rhs() const {
  if (node_->children.size() < 2) throw std::logic_error("formula has no right operand");
  return node_->children[1];
}

const Interval& Formula::interval() const {
  if (!is_temporal()) throw std::logic_error("formula is not temporal");
  return node_->window;
}

bool Formula::is_temporal() const noexcept {
  const Op o = op();
  return o == Op::kUntil || o == Op::kEventually || o == Op::kAlways;
}

bool Formula::is_binary() const noexcept {
  const Op o = op();
  return o == Op::kOr || o == Op::kAnd || o == Op::kImplies || o == Op::kUntil;
}

bool Formula::is_unary() const noexcept {
  const Op o = op();
  return o == Op::kNot || o == Op::kEventually || o == Op::kAlways;
}

bool Formula::is_core() const noexcept {
  switch (op()) {
    case Op::kTrue:
    case Op::kFalse:
    case Op::kPredicate: return true;
    case Op::kNot: return lhs().is_core();
    case Op::kOr:
    case Op::kUntil: return lhs().is_core() && rhs().is_core();
    default: return false;
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Op::kTrue:
    case Op::kFalse: return true;
    case Op::kPredicate: return a.name() == b.name();
    case Op::kNot: return a.lhs() == b.lhs();
    case Op::kOr:
    case Op::kAnd:
    case Op::kImplies: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Op::kUntil:
      return a.interval() == b.interval() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Op::kEventually:
    case Op::kAlways: return a.interval() == b.interval() && a.lhs() == b.lhs();
  }
  return false;
}

Formula make_unary(Op op, Formula child, Interval window) {
  const int depth = child.depth() + 1;
  std::vector<Formula> children;
  children.push_back(std::move(child));
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{op, {}, std::move(children), window, depth}));
}

Formula make_binary(Op op, Formula a, Formula b, Interval window) {
  const int depth = std::max(a.depth(), b.depth()) + 1;
  std::vector<Formula> children;
  children.push_back(std::move(a));
  children.push_back(std::move(b));
  return Formula(std::make_shared<const Formula::Node>(
      Formula::Node{op, {}, std::move(children), window, depth}));
}

Formula negate(Formula f) { return make_unary(Op::kNot, std::move(f), {}); }
Formula disjunction(Formula a, Formula b) { return make_binary(Op::kOr, std::move(a), std::move(b), {}); }
Formula conjunction(Formula a, Formula b) { return make_binary(Op::kAnd, std::move(a), std::move(b), {}); }
Formula implies(Formula a, Formula b) { return make_binary(Op::kImplies, std::move(a), std::move(b), {}); }

Formula until(Formula a, Formula b, Interval window) {
  return make_binary(Op::kUntil, std::move(a), std::move(b), Interval::checked(window.lo, window.hi));
}

Formula eventually(Formula f, Interval window) {
  return make_unary(Op::kEventually, std::move(f), Interval::checked(window.lo, window.hi));
}

Formula always(Formula f, Interval window) {
  return make_unary(Op::kAlways, std::move(f), Interval::checked(window.lo, window.hi));
}

Formula desugar(const Formula& f) {
  switch (f.op()) {
    case Op::kTrue:
    case Op::kFalse:
    case Op::kPredicate: return f;
    case Op::kNot: return negate(desugar(f.lhs()));
    case Op::kOr: return disjunction(desugar(f.lhs()), desugar(f.rhs()));
    case Op::kUntil: return until(desugar(f.lhs()), desugar(f.rhs()), f.interval());
    case Op::kAnd:
      return negate(disjunction(negate(desugar(f.lhs())), negate(desugar(f.rhs()))));
    case Op::kImplies: return disjunction(negate(desugar(f.lhs())), desugar(f.rhs()));
    case Op::kEventually: return until(Formula::top(), desugar(f.lhs()), f.interval());
    case Op::kAlways:
      return negate(until(Formula::top(), negate(desugar(f.lhs())), f.interval()));
  }
  throw std::logic_error("unknown formula operator");
}

namespace {

std::string bound_to_string(double v) { return std::isinf(v) ? "inf" : util::format_double(v); }

std::string window_to_string(const Interval& w) {
  return "[" + bound_to_string(w.lo) + "," + bound_to_string(w.hi) + "]";
}

}  // namespace

std::string to_string(const Formula& f) {
  switch (f.op()) {
    case Op::kTrue: return "true";
    case Op::kFalse: return "false";
    case Op::kPredicate: return f.name();
    case Op::kNot: return "!" + to_string(f.lhs());
    case Op::kOr: return "(" + to_string(f.lhs()) + " | " + to_string(f.rhs()) + ")";
    case Op::kAnd: return "(" + to_string(f.lhs()) + " & " + to_string(f.rhs()) + ")";
    case Op::kImplies: return "(" + to_string(f.lhs()) + " => " + to_string(f.rhs()) + ")";
    case Op::kUntil:
      return "(" + to_string(f.lhs()) + " U" + window_to_string(f.interval()) + " " +
             to_string(f.rhs()) + ")";
    case Op::kEventually: return "F" + window_to_string(f.interval()) + " " + to_string(f.lhs());
    case Op::kAlways: return "G" + window_to_string(f.interval()) + " " + to_string(f.lhs());
  }
  throw std::logic_error("unknown formula operator");
}

}  // namespace probsafe::stl
