#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include "probsafe/control/safe_controller.hpp"
#include "probsafe/evasion/environment.hpp"
#include "probsafe/evasion/geometry.hpp"
#include "probsafe/rl/action_mask.hpp"
#include "probsafe/rl/learned_controller.hpp"
#include "probsafe/rl/mlp.hpp"
#include "probsafe/rl/policy.hpp"
#include "probsafe/rl/serialization.hpp"
#include "probsafe/util/random.hpp"

using namespace probsafe;
using namespace probsafe::rl;
using evasion::Control;

namespace {

const verify::IntervalBox kBox({-0.002, -0.01}, {0.002, 0.01});

Mlp random_mlp(const std::vector<int>& sizes, util::Rng& rng) {
  Mlp net = Mlp::orthogonal(sizes, 1.3, 0.7, rng);
  for (auto& layer : net.layers()) {
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias[i] = rng.uniform(-0.5, 0.5);
  }
  return net;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "probsafe_test_rl";
  std::filesystem::create_directories(dir);
  return dir / name;
}

PolicyArch small_arch() {
  PolicyArch arch;
  arch.hidden = {8, 6};
  return arch;
}

}  // namespace

TEST(Mlp, ShapesAndParameterCount) {
  const Mlp net({7, 128, 128, 2});
  EXPECT_EQ(net.input_size(), 7);
  EXPECT_EQ(net.output_size(), 2);
  EXPECT_EQ(net.sizes(), (std::vector<int>{7, 128, 128, 2}));
  EXPECT_EQ(net.parameter_count(), 7u * 128 + 128 + 128 * 128 + 128 + 128 * 2 + 2);
  EXPECT_THROW(Mlp({3}), std::invalid_argument);
}

TEST(Mlp, OrthogonalInit) {
  util::Rng rng(1);
  const Mlp net = Mlp::orthogonal({5, 9, 3}, 2.0, 0.5, rng);
  const Eigen::MatrixXd& w0 = net.layers()[0].weight;  // 9 x 5: orthonormal columns
  EXPECT_TRUE((w0.transpose() * w0).isApprox(4.0 * Eigen::MatrixXd::Identity(5, 5), 1e-10));
  const Eigen::MatrixXd& w1 = net.layers()[1].weight;  // 3 x 9: orthonormal rows
  EXPECT_TRUE((w1 * w1.transpose()).isApprox(0.25 * Eigen::MatrixXd::Identity(3, 3), 1e-10));
  for (const auto& layer : net.layers()) EXPECT_TRUE(layer.bias.isZero());
}

TEST(Mlp, ForwardMatchesHandComputation) {
  Mlp net({2, 2, 1});
  net.layers()[0].weight << 1.0, -1.0, 0.5, 2.0;
  net.layers()[0].bias << 0.1, -0.2;
  net.layers()[1].weight << 3.0, -1.0;
  net.layers()[1].bias << 0.25;
  const Eigen::VectorXd x = (Eigen::VectorXd(2) << 0.3, -0.4).finished();
  const double h0 = std::tanh(0.3 + 0.4 + 0.1);
  const double h1 = std::tanh(0.15 - 0.8 - 0.2);
  EXPECT_NEAR(net.forward_one(x)[0], 3.0 * h0 - h1 + 0.25, 1e-14);
}

TEST(Mlp, BackwardMatchesFiniteDifferences) {
  util::Rng rng(21);
  Mlp net = random_mlp({3, 5, 4, 2}, rng);
  Eigen::MatrixXd x(3, 6);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
  Eigen::MatrixXd c(2, 6);
  for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = rng.uniform(-1, 1);
  auto loss = [&](const Mlp& m) { return (m.forward(x).array() * c.array()).sum(); };

  Mlp::Tape tape;
  net.forward(x, tape);
  Mlp grads(net.sizes());
  net.backward(tape, c, grads);

  Eigen::VectorXd flat(static_cast<Eigen::Index>(net.parameter_count()));
  Eigen::Index off = 0;
  net.flatten_into(flat, off);
  Eigen::VectorXd analytic(flat.size());
  off = 0;
  grads.flatten_into(analytic, off);

  const double h = 1e-6;
  for (Eigen::Index i = 0; i < flat.size(); ++i) {
    Mlp plus = net, minus = net;
    Eigen::VectorXd p = flat, m = flat;
    p[i] += h;
    m[i] -= h;
    Eigen::Index o1 = 0, o2 = 0;
    plus.assign_from(p, o1);
    minus.assign_from(m, o2);
    const double fd = (loss(plus) - loss(minus)) / (2 * h);
    EXPECT_NEAR(analytic[i], fd, 1e-7 * std::max(1.0, std::abs(fd))) << "parameter " << i;
  }
}

TEST(Mlp, BackwardAccumulates) {
  util::Rng rng(4);
  const Mlp net = random_mlp({2, 3, 1}, rng);
  const Eigen::MatrixXd x = Eigen::MatrixXd::Constant(2, 1, 0.5);
  Mlp::Tape tape;
  net.forward(x, tape);
  Mlp once(net.sizes()), twice(net.sizes());
  const Eigen::MatrixXd g = Eigen::MatrixXd::Ones(1, 1);
  net.backward(tape, g, once);
  net.backward(tape, g, twice);
  net.backward(tape, g, twice);
  EXPECT_TRUE(twice.layers()[0].weight.isApprox(2.0 * once.layers()[0].weight));
  twice.set_zero();
  EXPECT_TRUE(twice.layers()[1].bias.isZero());
}

TEST(Policy, ZeroParamsGiveZeroMean) {
  const PolicyParams p = PolicyParams::zeros(PolicyArch{});
  const std::vector<double> obs{0.3, -1.0, 2.0, 0.1, 0.0, 5.0, -5.0};
  EXPECT_TRUE(policy_mean(p, obs).isZero());
  EXPECT_DOUBLE_EQ(value_estimate(p, obs), 0.0);
  EXPECT_TRUE(p.log_std.isZero());
  EXPECT_THROW(policy_mean(p, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Policy, FlattenAssignRoundTrip) {
  util::Rng rng(2);
  PolicyParams p = PolicyParams::initialize(small_arch(), rng);
  EXPECT_EQ(p.size(), p.policy.parameter_count() + 2 + p.value.parameter_count());
  const Eigen::VectorXd flat = p.flatten();
  PolicyParams q = p.zeros_like();
  EXPECT_TRUE(q.flatten().isZero());
  q.assign(flat);
  EXPECT_EQ(q.flatten(), flat);
  EXPECT_THROW(q.assign(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Policy, InitialiseUsesSmallPolicyHead) {
  util::Rng rng(3);
  const PolicyParams p = PolicyParams::initialize(PolicyArch{}, rng);
  const auto& head = p.policy.layers().back().weight;
  EXPECT_TRUE((head * head.transpose()).isApprox(1e-4 * Eigen::MatrixXd::Identity(2, 2), 1e-8));
  const auto& vhead = p.value.layers().back().weight;
  EXPECT_NEAR(vhead.norm(), 1.0, 1e-10);
}

TEST(Policy, SamplingIsDeterministicPerSeed) {
  util::Rng init(5);
  const PolicyParams p = PolicyParams::initialize(PolicyArch{}, init);
  const std::vector<double> obs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  util::Rng a(8), b(8), c(9);
  for (int i = 0; i < 20; ++i) {
    const ActionSample sa = policy_sample(p, obs, a);
    const ActionSample sb = policy_sample(p, obs, b);
    EXPECT_EQ(sa.pre_squash, sb.pre_squash);
    EXPECT_EQ(sa.log_prob, sb.log_prob);
    EXPECT_TRUE(sa.raw.isApprox(Eigen::VectorXd(sa.pre_squash.array().tanh())));
  }
  EXPECT_NE(policy_sample(p, obs, a).pre_squash, policy_sample(p, obs, c).pre_squash);
}

TEST(Policy, LogProbAndEntropyFormulas) {
  const Eigen::VectorXd u = (Eigen::VectorXd(2) << 0.4, -1.3).finished();
  const Eigen::VectorXd mean = (Eigen::VectorXd(2) << 0.1, -0.2).finished();
  const Eigen::VectorXd log_std = (Eigen::VectorXd(2) << -0.5, 0.3).finished();
  double expected = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double s = std::exp(log_std[i]);
    const double z = (u[i] - mean[i]) / s;
    expected += -0.5 * z * z - std::log(s) - 0.5 * std::log(2 * evasion::kPi);
  }
  EXPECT_NEAR(gaussian_log_prob(u, mean, log_std), expected, 1e-12);
  const double jac = std::log(1 - std::pow(std::tanh(0.4), 2)) + std::log(1 - std::pow(std::tanh(-1.3), 2));
  EXPECT_NEAR(squash_log_jacobian(u), jac, 1e-12);
  EXPECT_NEAR(squashed_log_prob(u, mean, log_std), expected - jac, 1e-12);
  EXPECT_NEAR(gaussian_entropy(log_std), -0.5 + 0.3 + 2 * (0.5 + 0.5 * std::log(2 * evasion::kPi)), 1e-12);

  // Stable far into the saturated tail.
  const Eigen::VectorXd big = Eigen::VectorXd::Constant(1, 40.0);
  EXPECT_TRUE(std::isfinite(squash_log_jacobian(big)));
  EXPECT_NEAR(squash_log_jacobian(big), 2 * (std::log(2.0) - 40.0), 1e-9);
}

TEST(Policy, SquashedSampleDistribution) {
  PolicyArch arch;
  arch.obs_dim = 1;
  arch.act_dim = 1;
  arch.hidden = {4};
  PolicyParams p = PolicyParams::zeros(arch);
  p.log_std[0] = std::log(0.8);
  const std::vector<double> obs{0.0};
  util::Rng rng(123);
  const int n = 100000;
  std::vector<double> raw(n);
  for (int i = 0; i < n; ++i) raw[i] = policy_sample(p, obs, rng).raw[0];
  std::sort(raw.begin(), raw.end());

  // Kolmogorov-Smirnov distance to P(tanh(u) <= a) = Phi(atanh(a) / sigma).
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = std::clamp(raw[i], -1.0 + 1e-15, 1.0 - 1e-15);
    const double f = normal_cdf(std::atanh(a) / 0.8);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
  }
  EXPECT_LT(ks, 1.95 / std::sqrt(static_cast<double>(n)));

  const std::vector<double> edges{-1.0, -0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9, 1.0};
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const auto lo = std::lower_bound(raw.begin(), raw.end(), edges[b]);
    const auto hi = std::lower_bound(raw.begin(), raw.end(), edges[b + 1]);
    const double freq = static_cast<double>(hi - lo) / n;
    const double lo_cdf = b == 0 ? 0.0 : normal_cdf(std::atanh(edges[b]) / 0.8);
    const double hi_cdf = b + 2 == edges.size() ? 1.0 : normal_cdf(std::atanh(edges[b + 1]) / 0.8);
    const double prob = hi_cdf - lo_cdf;
    EXPECT_NEAR(freq, prob, 5.0 * std::sqrt(prob * (1 - prob) / n)) << "bin " << b;
  }
}

TEST(Policy, SquashedDensityIntegratesToOne) {
  const Eigen::VectorXd mean = Eigen::VectorXd::Constant(1, 0.3);
  const Eigen::VectorXd log_std = Eigen::VectorXd::Constant(1, -0.2);
  const int m = 200000;
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    const double a = -1.0 + (i + 0.5) * 2.0 / m;
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(1, std::atanh(a));
    total += std::exp(squashed_log_prob(u, mean, log_std)) * 2.0 / m;
  }
  EXPECT_NEAR(total, 1.0, 1e-4);
}

TEST(ActionMask, Examples) {
  const ActionMask mask(kBox);
  const Control safe{0.1, 0.0};
  const Control up = mask.apply({1.0, 1.0}, safe);
  EXPECT_NEAR(up.v, 0.102, 1e-15);
  EXPECT_NEAR(up.omega, 0.01, 1e-15);
  const Control down = mask.apply({-1.0, -1.0}, safe);
  EXPECT_NEAR(down.v, 0.098, 1e-15);
  EXPECT_NEAR(down.omega, -0.01, 1e-15);
  const Control mid = mask.apply({0.0, 0.0}, safe);
  EXPECT_NEAR(mid.v, safe.v, 1e-15);
  EXPECT_NEAR(mid.omega, safe.omega, 1e-15);
  const Control clipped = mask.apply({7.0, -3.0}, safe);
  EXPECT_EQ(clipped, mask.apply({1.0, -1.0}, safe));

  EXPECT_DOUBLE_EQ(mask.normalized_difference(safe, safe), 0.0);
  EXPECT_NEAR(mask.normalized_difference(up, safe), 1.0, 1e-12);
  EXPECT_NEAR(mask.normalized_difference({0.102, 0.0}, safe), std::sqrt(0.5), 1e-12);
  EXPECT_EQ(mask_action({0.5, 0.5}, safe, mask), mask.apply({0.5, 0.5}, safe));
}

TEST(ActionMask, Validation) {
  EXPECT_THROW(ActionMask(verify::IntervalBox({0.1, -0.1}, {0.2, 0.1})), std::invalid_argument);
  EXPECT_THROW(ActionMask(verify::IntervalBox({-0.1}, {0.1})), std::invalid_argument);
  const ActionMask degenerate(verify::IntervalBox({0.0, 0.0}, {0.0, 0.0}));
  const Control safe{0.12, -0.3};
  EXPECT_EQ(degenerate.apply({0.9, -0.4}, safe), safe);
  EXPECT_DOUBLE_EQ(degenerate.normalized_difference({0.5, 0.5}, safe), 0.0);
}

TEST(ActionMask, ContainmentProperty) {
  util::Rng rng(31);
  for (int i = 0; i < 20000; ++i) {
    const double lo0 = rng.uniform(-0.05, 0.0), hi0 = rng.uniform(0.0, 0.05);
    const double lo1 = rng.uniform(-0.5, 0.0), hi1 = rng.uniform(0.0, 0.5);
    const ActionMask mask(verify::IntervalBox({lo0, lo1}, {hi0, hi1}));
    const Control safe{rng.uniform(0.0, 0.2), rng.uniform(-3.6, 3.6)};
    const Eigen::Vector2d raw(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const Control applied = mask.apply(raw, safe);
    ASSERT_TRUE(mask.contains(applied, safe));
    const double d = mask.normalized_difference(applied, safe);
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0 + 1e-12);
  }
  const ActionMask mask(kBox);
  EXPECT_FALSE(mask.contains({0.103, 0.0}, {0.1, 0.0}));
  EXPECT_FALSE(mask.contains({0.1, -0.011}, {0.1, 0.0}));
}

TEST(Serialization, RoundTripIsBitExact) {
  util::Rng rng(12);
  PolicyParams p = PolicyParams::initialize(small_arch(), rng);
  p.log_std << -0.7, 0.2;
  const PolicyParams q = decode_policy(encode_policy(p));
  EXPECT_EQ(q.flatten(), p.flatten());
  EXPECT_EQ(q.policy.sizes(), p.policy.sizes());
  EXPECT_EQ(q.value.sizes(), p.value.sizes());

  const auto path = temp_file("roundtrip.bin");
  save_policy(p, path);
  EXPECT_EQ(load_policy(path).flatten(), p.flatten());
  EXPECT_EQ(sidecar_path(path).filename().string(), "roundtrip.bin.json");
}

TEST(Serialization, CorruptInputIsRejected) {
  util::Rng rng(13);
  const PolicyParams p = PolicyParams::initialize(small_arch(), rng);
  const std::string good = encode_policy(p);
  EXPECT_EQ(good.substr(0, 8), "PSAFEPOL");

  EXPECT_THROW(decode_policy(""), PolicyFormatError);
  EXPECT_THROW(decode_policy(good.substr(0, good.size() - 1)), PolicyFormatError);
  EXPECT_THROW(decode_policy(good + "x"), PolicyFormatError);

  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_policy(bad_magic), PolicyFormatError);

  std::string bad_version = good;
  bad_version[8] = 2;
  EXPECT_THROW(decode_policy(bad_version), PolicyFormatError);

  std::string bad_count = good;
  bad_count[24] = 0x7f;
  EXPECT_THROW(decode_policy(bad_count), PolicyFormatError);

  std::string nan_value = good;
  const double nan = std::nan("");
  std::memcpy(nan_value.data() + nan_value.size() - sizeof(double), &nan, sizeof(double));
  EXPECT_THROW(decode_policy(nan_value), PolicyFormatError);
}

TEST(Serialization, FileErrorsNameThePath) {
  const auto missing = temp_file("does_not_exist.bin");
  std::filesystem::remove(missing);
  try {
    load_policy(missing);
    FAIL() << "expected an exception";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("cannot read policy file"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("does_not_exist.bin"), std::string::npos);
  }
  const auto junk = temp_file("junk.bin");
  std::ofstream(junk, std::ios::binary) << "not a policy";
  try {
    load_policy(junk);
    FAIL() << "expected an exception";
  } catch (const PolicyFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("junk.bin"), std::string::npos);
  }
}

TEST(LearnedController, ZeroPolicyReproducesSafeController) {
  const evasion::TaskConfig task;
  const auto safe = std::make_shared<const control::SafeController>(task);
  const LearnedPolicyController learned(PolicyParams::zeros(PolicyArch{}), task, safe, ActionMask(kBox));
  evasion::EvasionEnv env(task);
  util::Rng rng(6);
  for (int e = 0; e < 5; ++e) {
    env.reset(env.sample_initial_condition(rng));
    while (!env.done()) {
      const Control a = learned(env.state());
      const Control s = (*safe)(env.state());
      EXPECT_NEAR(a.v, s.v, 1e-15);
      EXPECT_NEAR(a.omega, s.omega, 1e-15);
      env.step(a, s);
    }
  }
}

TEST(LearnedController, DeterministicAndContained) {
  const evasion::TaskConfig task;
  const auto safe = std::make_shared<const control::SafeController>(task);
  util::Rng init(7);
  PolicyParams p = PolicyParams::initialize(PolicyArch{}, init);
  for (auto& layer : p.policy.layers()) layer.weight *= 50.0;
  const ActionMask mask(kBox);
  const LearnedPolicyController learned(p, task, safe, mask);
  evasion::EvasionEnv env(task);
  util::Rng rng(8);
  env.reset(env.sample_initial_condition(rng));
  while (!env.done()) {
    const Control a = learned(env.state());
    EXPECT_EQ(a, learned(env.state()));
    const Control s = (*safe)(env.state());
    EXPECT_TRUE(mask.contains(a, s));
    env.step(a, s);
  }
  PolicyArch wrong;
  wrong.obs_dim = 3;
  EXPECT_THROW(LearnedPolicyController(PolicyParams::zeros(wrong), task, safe, mask), std::invalid_argument);
}
