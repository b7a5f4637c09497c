#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "formula_suite.hpp"
#include "probsafe/stl/formula.hpp"
#include "probsafe/stl/monitor.hpp"
#include "probsafe/stl/parser.hpp"
#include "probsafe/util/random.hpp"

using namespace probsafe::stl;

namespace {

Formula p() { return Formula::predicate("p"); }
Formula q() { return Formula::predicate("q"); }

PredicateTable scalar_table() {
  PredicateTable t;
  t.add("p", [](std::span<const double> x) { return x[0]; });
  t.add("big", [](std::span<const double> x) { return std::abs(x[0]) - 2.0; });
  return t;
}

Signal scalar_signal(const std::vector<double>& xs, double dt) {
  Signal s(1, dt);
  for (const double x : xs) s.push_back(std::span<const double>(&x, 1));
  return s;
}

}  // namespace

TEST(Parser, PrecedenceAndPrinting) {
  EXPECT_EQ(to_string(parse_formula("a | b & c")), "(a | (b & c))");
  EXPECT_EQ(to_string(parse_formula("a => b => c")), "(a => (b => c))");
  EXPECT_EQ(to_string(parse_formula("!a & F[0,2] b")), "(!a & F[0,2] b)");
  EXPECT_EQ(to_string(parse_formula("a U[0.5,inf] b U[0,1] c")), "(a U[0.5,inf] (b U[0,1] c))");
  EXPECT_EQ(to_string(parse_formula("G a")), "G[0,inf] a");
  EXPECT_EQ(to_string(parse_formula("true | false")), "(true | false)");
}

TEST(Parser, RoundTripsThroughPrinter) {
  for (const auto* text : {"G((infront & near) => evade)", "!(true U[0,2] big)", "F[1,3] (a | !b) & G[0,inf] c",
                           "(a U[0,1] b) => (c U[2,inf] d)"}) {
    const Formula f = parse_formula(text);
    EXPECT_EQ(parse_formula(to_string(f)), f) << text;
  }
}

TEST(Parser, SafetySpecificationShape) {
  const Formula f = parse_formula("G((infront & near) => evade)");
  ASSERT_EQ(f.op(), Op::kAlways);
  EXPECT_EQ(f.interval(), Interval::unbounded());
  EXPECT_EQ(f.lhs().op(), Op::kImplies);
  EXPECT_EQ(f.lhs().lhs().op(), Op::kAnd);
  EXPECT_EQ(f.lhs().rhs().name(), "evade");
  EXPECT_EQ(f.depth(), 4);
}

TEST(Parser, ReportsUnknownOperatorWithPosition) {
  try {
    parse_formula("a && b");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 3);
    EXPECT_NE(std::string(e.what()).find("unknown operator"), std::string::npos);
  }
  try {
    parse_formula("a |\n  b -> c");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 5);
  }
}

TEST(Parser, RejectsMalformedIntervals) {
  for (const auto* text : {"F[2,1] a", "F[-1,2] a", "a U[0] b", "G[0,] a", "F[inf,inf] a"}) {
    EXPECT_THROW(parse_formula(text), ParseError) << text;
  }
  try {
    parse_formula("F[3,1] a");
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("malformed interval"), std::string::npos);
  }
}

TEST(Parser, RejectsIncompleteInput) {
  for (const auto* text : {"", "(a | b", "a |", "!", "a b", "U", "G"}) {
    EXPECT_THROW(parse_formula(text), ParseError) << "'" << text << "'";
  }
}

TEST(Formula, IntervalValidation) {
  EXPECT_THROW(Interval::checked(1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(Interval::checked(-0.1, 0.5), std::invalid_argument);
  EXPECT_NO_THROW(Interval::checked(0.0, kInfinity));
}

TEST(Formula, DesugarRewrites) {
  const Interval w = Interval::checked(0.0, 2.0);
  EXPECT_EQ(desugar(eventually(p(), w)), until(Formula::top(), p(), w));
  EXPECT_EQ(desugar(always(p(), w)), negate(until(Formula::top(), negate(p()), w)));
  EXPECT_EQ(desugar(conjunction(p(), q())), negate(disjunction(negate(p()), negate(q()))));
  EXPECT_EQ(desugar(implies(p(), q())), disjunction(negate(p()), q()));
  const Formula nested = desugar(parse_formula("G(a => F[0,1] b)"));
  EXPECT_TRUE(nested.is_core());
}

TEST(StepWindow, ToleratesFloatingPointTimes) {
  const StepWindow w = step_window(Interval::checked(0.0, 0.3), 0.1);
  EXPECT_EQ(w.first, 0u);
  EXPECT_EQ(w.last, 3u);
  const StepWindow v = step_window(Interval::checked(0.15, 0.25), 0.1);
  EXPECT_EQ(v.first, 2u);
  EXPECT_EQ(v.last, 2u);
  EXPECT_EQ(step_window(Interval::unbounded(), 0.1).last, SIZE_MAX);
}

TEST(Monitor, BoundedAlwaysExampleIsWindowMinimum) {
  // not (true U[0,2] |s| > 2) holds iff |s| <= 2 on [t, t+2]; its
  // robustness is the window minimum of 2 - |s|.
  const Formula f = parse_formula("!(true U[0,2] big)");
  probsafe::util::Rng rng(5);
  std::vector<double> xs;
  for (int i = 0; i < 25; ++i) xs.push_back(rng.uniform(-3.0, 3.0));
  const double dt = 0.25;
  const Signal s = scalar_signal(xs, dt);
  const Monitor m(f, scalar_table());
  const auto rob = m.robustness_trace(s);
  const auto sat = m.satisfaction_trace(s);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    double expected = std::numeric_limits<double>::infinity();
    for (std::size_t j = k; j < xs.size() && j <= k + 8; ++j) expected = std::min(expected, 2.0 - std::abs(xs[j]));
    EXPECT_DOUBLE_EQ(rob[k], expected) << k;
    EXPECT_EQ(sat[k], expected >= 0.0) << k;
  }
}

TEST(Monitor, UntilHandComputed) {
  PredicateTable t;
  t.add("a", [](std::span<const double> x) { return x[0]; });
  t.add("b", [](std::span<const double> x) { return x[1]; });
  const Signal s({{3, -1}, {2, -2}, {1, 4}, {-5, 6}}, 1.0);
  const Monitor m(parse_formula("a U[1,2] b"), t);
  const auto rob = m.robustness_trace(s);
  // k=0: candidates k'=1: min(b1=-2, a0=3) = -2 ; k'=2: min(b2=4, a0, a1) = 2 -> 2
  EXPECT_EQ(rob[0], 2.0);
  // k=1: k'=2: min(4, a1=2) = 2 ; k'=3: min(6, 2, 1) = 1 -> 2
  EXPECT_EQ(rob[1], 2.0);
  // k=2: k'=3: min(6, a2=1) = 1
  EXPECT_EQ(rob[2], 1.0);
  // k=3: window past the end -> -inf
  EXPECT_EQ(rob[3], -kInfinity);
  EXPECT_FALSE(m.satisfies(s, 3));
}

TEST(Monitor, WindowsClipAtSignalEnd) {
  const Signal s = scalar_signal({1.0, -1.0}, 0.5);
  const Monitor f(parse_formula("F[1,2] p"), scalar_table());
  const Monitor g(parse_formula("G[1,2] p"), scalar_table());
  EXPECT_EQ(f.robustness(s, 0), -kInfinity);
  EXPECT_EQ(g.robustness(s, 0), kInfinity);
  EXPECT_FALSE(f.satisfies(s, 0));
  EXPECT_TRUE(g.satisfies(s, 0));
}

TEST(Monitor, ConstantsAreInfinite) {
  const Signal s = scalar_signal({0.3}, 0.1);
  EXPECT_EQ(robustness(Formula::top(), s, 0, scalar_table()), kInfinity);
  EXPECT_EQ(robustness(Formula::bottom(), s, 0, scalar_table()), -kInfinity);
}

TEST(Monitor, UnknownPredicateIsAnError) {
  EXPECT_THROW(Monitor(parse_formula("G missing"), scalar_table()), EvaluationError);
}

TEST(Monitor, IndexOutOfRange) {
  const Signal s = scalar_signal({0.3}, 0.1);
  const Monitor m(parse_formula("p"), scalar_table());
  EXPECT_THROW(m.robustness(s, 1), std::out_of_range);
}

TEST(Monitor, SoundnessAgainstBruteForceDepth3) {
  const auto formulas = oracle::enumerate_formulas(3);
  const auto signals = oracle::random_signals(25, 10, 2024);
  oracle::SoundnessResult r;
  oracle::check_soundness(formulas, signals, r);
  EXPECT_EQ(r.failures, 0u) << r.first_failure;
  EXPECT_GT(r.checks, 100000u);
}
