#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <vector>

#include "probsafe/control/safe_controller.hpp"
#include "probsafe/evasion/rollout.hpp"
#include "probsafe/rl/mlp.hpp"
#include "probsafe/stl/monitor.hpp"
#include "probsafe/stl/parser.hpp"
#include "probsafe/verify/scenario.hpp"

using namespace probsafe;

namespace {

stl::Signal random_signal(std::size_t length, std::uint64_t seed) {
  util::Rng rng(seed);
  stl::Signal s(2, 0.1);
  for (std::size_t k = 0; k < length; ++k) {
    const double x[2] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    s.push_back(x);
  }
  return s;
}

stl::PredicateTable two_predicates() {
  stl::PredicateTable t;
  t.add("p", [](std::span<const double> x) { return x[0]; });
  t.add("q", [](std::span<const double> x) { return x[1] - 0.2; });
  return t;
}

}  // namespace

static void BM_MonitorRobustnessTrace(benchmark::State& state) {
  const stl::Signal s = random_signal(static_cast<std::size_t>(state.range(0)), 1);
  const stl::Monitor monitor(stl::parse_formula("G((p & !q) => F[0,2] q)"), two_predicates());
  for (auto _ : state) benchmark::DoNotOptimize(monitor.robustness_trace(s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonitorRobustnessTrace)->Arg(100)->Arg(300)->Arg(1000);

static void BM_MonitorNestedTemporal(benchmark::State& state) {
  const stl::Signal s = random_signal(300, 2);
  const stl::Monitor monitor(stl::parse_formula("G[0,5] (p U[0,3] q)"), two_predicates());
  for (auto _ : state) benchmark::DoNotOptimize(monitor.robustness(s));
}
BENCHMARK(BM_MonitorNestedTemporal);

static void BM_MlpForward(benchmark::State& state) {
  util::Rng rng(3);
  const rl::Mlp net = rl::Mlp::orthogonal({7, 128, 128, 2}, std::sqrt(2.0), 0.01, rng);
  Eigen::MatrixXd input = Eigen::MatrixXd::Random(7, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(net.forward(input));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(64)->Arg(2048);

static void BM_MlpBackward(benchmark::State& state) {
  util::Rng rng(4);
  const rl::Mlp net = rl::Mlp::orthogonal({7, 128, 128, 2}, std::sqrt(2.0), 0.01, rng);
  rl::Mlp grads({7, 128, 128, 2});
  const Eigen::MatrixXd input = Eigen::MatrixXd::Random(7, 64);
  const Eigen::MatrixXd upstream = Eigen::MatrixXd::Random(2, 64);
  rl::Mlp::Tape tape;
  for (auto _ : state) {
    net.forward(input, tape);
    net.backward(tape, upstream, grads);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_MlpBackward);

static void BM_SafeEpisode(benchmark::State& state) {
  const evasion::TaskConfig task;
  const auto safe = std::make_shared<const control::SafeController>(task);
  const evasion::EvasionRolloutSource source(task, safe, safe);
  const verify::RobustnessFn rho = evasion::make_robustness_fn(task);
  util::Rng rng(5);
  for (auto _ : state) {
    const auto ic = source.sample_initial_condition(rng);
    benchmark::DoNotOptimize(rho(source.rollout(ic, nullptr, rng)));
  }
}
BENCHMARK(BM_SafeEpisode)->Unit(benchmark::kMillisecond);

static void BM_Probv(benchmark::State& state) {
  const evasion::TaskConfig task;
  const auto safe = std::make_shared<const control::SafeController>(task);
  const evasion::EvasionRolloutSource source(task, safe, safe);
  const verify::RobustnessFn rho = evasion::make_robustness_fn(task);
  const verify::IntervalBox box({-0.002, -0.01}, {0.002, 0.01});
  const verify::ProbvOptions options{state.range(0), 0.05, 9, 1};
  for (auto _ : state) benchmark::DoNotOptimize(verify::probv(source, &box, rho, options));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Probv)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
