#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bandit/environment.hpp"
#include "bandit/math.hpp"
#include "bandit/rng.hpp"

using namespace bandit;

namespace {
StochasticEnv twoArm(double p0, double p1) {
  return StochasticEnv(
      {StochasticArmSpec::bernoulli(p0), StochasticArmSpec::bernoulli(p1)});
}
}  // namespace

TEST_CASE("bernoulli arm sampling") {
  StochasticEnv sure(
      {StochasticArmSpec::bernoulli(1.0), StochasticArmSpec::bernoulli(0.0)});
  RngStream rng(1, 0);
  for (int i = 0; i < 100; ++i) {
    CHECK(sure.sampleReward(0, 1, rng) == 1.0);
    CHECK(sure.sampleReward(1, 1, rng) == 0.0);
  }

  StochasticEnv env({StochasticArmSpec::bernoulli(0.6)});
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += env.sampleReward(0, 1, rng);
  CHECK(sum / n == doctest::Approx(0.6).epsilon(0.00834));
  CHECK(env.expectedReward(0, 1) == doctest::Approx(0.6));
  CHECK_THROWS_AS(StochasticArmSpec::bernoulli(1.5), std::invalid_argument);
}

TEST_CASE("gaussian arm with clamping bounds") {
  auto spec = StochasticArmSpec::gaussian(0.9, 0.4).withBounds(0.0, 1.0);
  StochasticEnv env({spec});
  RngStream rng(2, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double r = env.sampleReward(0, 1, rng);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
    sum += r;
  }
  double exact = clamped_gaussian_mean(0.9, 0.4, 0.0, 1.0);
  CHECK(env.expectedReward(0, 1) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(sum / n == doctest::Approx(exact).epsilon(0.01));

  double lo = 0.0, hi = 0.0;
  CHECK(env.rewardBounds(lo, hi));
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(1.0));

  StochasticEnv unbounded({StochasticArmSpec::gaussian(0.0, 1.0)});
  CHECK_FALSE(unbounded.rewardBounds(lo, hi));
  CHECK_FALSE(unbounded.deterministic());
}

TEST_CASE("oracle_best and gap on a stationary instance") {
  StochasticEnv env = twoArm(0.9, 0.6);
  OracleBest best = oracle_best(env, 1);
  CHECK(best.arm == 0);
  CHECK(best.value == doctest::Approx(0.9));
  // Stationary: the oracle never moves.
  for (std::uint64_t t : {std::uint64_t(1), std::uint64_t(50),
                          std::uint64_t(100000)}) {
    CHECK(oracle_best(env, t).arm == 0);
    CHECK(oracle_best(env, t).value == doctest::Approx(0.9));
  }
  CHECK(gap(env, 0, 1) == doctest::Approx(0.0));
  CHECK(gap(env, 1, 1) == doctest::Approx(0.3));
}

TEST_CASE("oracle_top_m sums the m best expectations") {
  StochasticEnv env({StochasticArmSpec::bernoulli(0.9),
                     StochasticArmSpec::bernoulli(0.5),
                     StochasticArmSpec::bernoulli(0.7)});
  CHECK(oracle_top_m(env, 1, 1) == doctest::Approx(0.9));
  CHECK(oracle_top_m(env, 1, 2) == doctest::Approx(1.6));
  CHECK(oracle_top_m(env, 1, 3) == doctest::Approx(2.1));
  CHECK_THROWS_AS(oracle_top_m(env, 1, 4), std::domain_error);
}

TEST_CASE("piecewise nonstationary breakpoint semantics") {
  NonstationaryEnv env(
      {NonstationaryEnv::Segment{1,
                                 {StochasticArmSpec::bernoulli(0.9),
                                  StochasticArmSpec::bernoulli(0.6)}},
       NonstationaryEnv::Segment{500,
                                 {StochasticArmSpec::bernoulli(0.2),
                                  StochasticArmSpec::bernoulli(0.8)}}});
  CHECK(oracle_best(env, 499).arm == 0);
  CHECK(oracle_best(env, 499).value == doctest::Approx(0.9));
  CHECK(oracle_best(env, 500).arm == 1);
  CHECK(oracle_best(env, 500).value == doctest::Approx(0.8));
  CHECK(env.expectedReward(0, 500) == doctest::Approx(0.2));
  CHECK(env.armAt(1, 499).p == doctest::Approx(0.6));
  CHECK(env.armAt(1, 500).p == doctest::Approx(0.8));

  CHECK_THROWS_AS(
      NonstationaryEnv(std::vector<NonstationaryEnv::Segment>{
          {2, {StochasticArmSpec::bernoulli(0.5)}}}),
      std::invalid_argument);
}

TEST_CASE("drifting nonstationary gap example") {
  NonstationaryEnv env(
      {StochasticArmSpec::bernoulli(0.9), StochasticArmSpec::bernoulli(0.6)},
      {0.0, 0.0001});
  CHECK(env.expectedReward(1, 1000) == doctest::Approx(0.7));
  CHECK(gap(env, 1, 1000) == doctest::Approx(0.2));
  // Drift clamps Bernoulli p into [0,1].
  CHECK(env.expectedReward(1, 100000) == doctest::Approx(1.0));
  RngStream rng(3, 0);
  double r = env.sampleReward(1, 100000, rng);
  CHECK(r == doctest::Approx(1.0));
}

TEST_CASE("adversarial table lookups are exact and rng-free") {
  AdversarialEnv env({{1.0, 0.0}, {0.5, 0.25}, {0.0, 0.25}});
  CHECK(env.horizon() == 3);
  CHECK(env.deterministic());
  RngStream a(4, 0);
  RngStream b(4, 0);
  CHECK(env.sampleReward(1, 3, a) == doctest::Approx(0.25));
  CHECK(env.sampleReward(0, 2, a) == doctest::Approx(0.5));
  CHECK(env.expectedReward(0, 1) == doctest::Approx(1.0));
  // Sampling consumed no randomness.
  CHECK(a.nextU32() == b.nextU32());
  CHECK_THROWS_AS(env.sampleReward(0, 4, a), std::domain_error);

  double lo = 0.0, hi = 0.0;
  CHECK(env.rewardBounds(lo, hi));
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(1.0));

  std::vector<std::vector<double>> ragged = {{0.5}, {0.5, 0.5}};
  CHECK_THROWS_AS(AdversarialEnv{ragged}, std::invalid_argument);
  std::vector<std::vector<double>> outOfRange = {{1.5}};
  CHECK_THROWS_AS(AdversarialEnv{outOfRange}, std::invalid_argument);
}

TEST_CASE("same seed same environment draws") {
  StochasticEnv env1 = twoArm(0.4, 0.7);
  StochasticEnv env2 = twoArm(0.4, 0.7);
  RngStream r1(77, 5, 0);
  RngStream r2(77, 5, 0);
  for (std::uint64_t t = 1; t <= 500; ++t) {
    ArmId arm = t % 2;
    CHECK(env1.sampleReward(arm, t, r1) == env2.sampleReward(arm, t, r2));
  }
}

TEST_CASE("contextual linear environment geometry") {
  ContextualLinearEnv env({{1.0, 0.0}, {0.0, 1.0}}, 0.0);
  CHECK(env.numArms() == 2);
  CHECK(env.contextDim() == 2);
  RngStream rng(6, 0);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> ctx = env.sampleContext(rng);
    REQUIRE(ctx.size() == 2);
    double norm = std::sqrt(ctx[0] * ctx[0] + ctx[1] * ctx[1]);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  }
  std::vector<double> ctx = {0.6, -0.8};
  CHECK(env.expectedReward(0, ctx) == doctest::Approx(0.6));
  CHECK(env.expectedReward(1, ctx) == doctest::Approx(-0.8));
  // Zero noise: sample equals expectation.
  CHECK(env.sampleReward(0, ctx, rng) == doctest::Approx(0.6));

  ContextualLinearEnv noisy({{1.0, 0.0}}, 0.5);
  double sum = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) sum += noisy.sampleReward(0, ctx, rng);
  CHECK(sum / n == doctest::Approx(0.6).epsilon(0.05));
}

TEST_CASE("continuum environment triangle and parabola") {
  ContinuumEnv tri(ContinuumEnv::MeanFn::Triangle, 0.7, 0.9,
                   ContinuumEnv::Noise::Bernoulli);
  CHECK(tri.oraclePoint() == doctest::Approx(0.7));
  CHECK(tri.oracleValue() == doctest::Approx(0.9));
  CHECK(tri.meanAt(0.7) == doctest::Approx(0.9));
  CHECK(tri.meanAt(0.5) == doctest::Approx(0.7));
  CHECK(tri.meanAt(1.0) == doctest::Approx(0.6));

  RngStream rng(8, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double r = tri.sampleAt(0.5, rng);
    CHECK((r == 0.0 || r == 1.0));
    sum += r;
  }
  CHECK(sum / n == doctest::Approx(0.7).epsilon(0.01));

  ContinuumEnv par(ContinuumEnv::MeanFn::Parabola, 0.5, 1.0,
                   ContinuumEnv::Noise::Gaussian, 0.0, 2.0);
  CHECK(par.meanAt(0.5) == doctest::Approx(1.0));
  CHECK(par.meanAt(0.0) == doctest::Approx(1.0 - 2.0 * 0.25));
  CHECK(par.sampleAt(0.25, rng) == doctest::Approx(par.meanAt(0.25)));

  CHECK_THROWS_AS(ContinuumEnv(ContinuumEnv::MeanFn::Triangle, 1.4, 0.9,
                               ContinuumEnv::Noise::Bernoulli),
                  std::invalid_argument);
}
