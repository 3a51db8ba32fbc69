#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "bandit/adversarial.hpp"
#include "bandit/environment.hpp"
#include "bandit/nonstationary.hpp"
#include "bandit/rng.hpp"
#include "bandit/ucb.hpp"

using namespace bandit;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

// Two-arm piecewise environment with deterministic 1/0 rewards: the paying
// arm flips at switchStep.
NonstationaryEnv makeSwitchEnv(std::uint64_t switchStep) {
  NonstationaryEnv::Segment first, second;
  first.start = 1;
  first.arms = {StochasticArmSpec::bernoulli(1.0),
                StochasticArmSpec::bernoulli(0.0)};
  second.start = switchStep;
  second.arms = {StochasticArmSpec::bernoulli(0.0),
                 StochasticArmSpec::bernoulli(1.0)};
  return NonstationaryEnv({first, second});
}

// Plays the policy against the environment, returns the fraction of the last
// `tail` steps spent on the best arm of the final segment.
template <typename Env>
double lateBestShare(Policy& policy, Env& env, std::uint64_t H,
                     std::uint64_t tail, std::uint64_t seed) {
  RngStream envRng(seed, 0, 0);
  RngStream polRng(seed, 0, 1);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 1; t <= H; ++t) {
    auto d = policy.select(t, polRng);
    double r = env.sampleReward(d.arms.front(), t, envRng);
    policy.observe(t, d, {r});
    if (t > H - tail && d.arms.front() == oracle_best(env, t).arm) hits += 1;
  }
  return double(hits) / double(tail);
}
}  // namespace

TEST_CASE("discounted stats with no discount match plain means") {
  DiscountedStats stats(3, 1.0);
  std::vector<double> sum(3, 0.0);
  std::vector<double> cnt(3, 0.0);
  RngStream rng(11, 0);
  for (int i = 0; i < 500; ++i) {
    ArmId arm = rng.uniformIndex(3);
    double r = rng.uniform01();
    stats.record(arm, r);
    sum[arm] += r;
    cnt[arm] += 1.0;
  }
  for (ArmId a = 0; a < 3; ++a) {
    CHECK(std::abs(ducb_mean(stats, a) - sum[a] / cnt[a]) <= 1e-12);
  }
  CHECK(stats.totalCount() == doctest::Approx(500.0));
}

TEST_CASE("discounted stats worked examples") {
  DiscountedStats one(1, 0.5);
  one.record(0, 1.0);
  CHECK(ducb_mean(one, 0) == doctest::Approx(1.0));
  one.record(0, 0.0);
  // num decays to 0.5, count to 0.5 before the new unit pull.
  CHECK(ducb_mean(one, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  one.record(0, 0.0);
  CHECK(one.totalCount() == doctest::Approx(1.75).epsilon(1e-12));

  DiscountedStats two(2, 0.9);
  two.record(0, 1.0);
  two.record(1, 1.0);
  two.record(0, 0.0);
  CHECK(ducb_mean(two, 0) ==
        doctest::Approx(0.44751381215469616).epsilon(1e-12));
  CHECK(two.totalCount() == doctest::Approx(2.71).epsilon(1e-12));
  CHECK(ducb_pad(two, 0, 1.0, 0.5) ==
        doctest::Approx(1.0495716752741044).epsilon(1e-12));

  // Unplayed arms are maximally optimistic.
  DiscountedStats cold(2, 0.9);
  cold.record(0, 0.3);
  CHECK(ducb_mean(cold, 1) == kInf);
  CHECK(ducb_pad(cold, 1, 1.0, 0.5) == kInf);

  // The effective sample size saturates at 1/(1-gamma).
  DiscountedStats sat(1, 0.5);
  for (int i = 0; i < 200; ++i) sat.record(0, 1.0);
  CHECK(sat.totalCount() <= 2.0);
  CHECK(sat.totalCount() == doctest::Approx(2.0).epsilon(1e-9));

  CHECK_THROWS_AS(DiscountedStats(0, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(DiscountedStats(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DiscountedStats(2, 1.2), std::invalid_argument);
}

TEST_CASE("sliding window means and pads") {
  // Window at least as long as the stream: plain running mean.
  WindowBuffer big(64);
  double sum = 0.0;
  RngStream rng(12, 0);
  for (int i = 0; i < 50; ++i) {
    double r = rng.uniform01();
    big.push(0, r);
    sum += r;
  }
  CHECK(swucb_mean(big, 0) == doctest::Approx(sum / 50.0).epsilon(1e-12));

  WindowBuffer last(1);
  last.push(0, 0.2);
  last.push(0, 0.9);
  CHECK(swucb_mean(last, 0) == doctest::Approx(0.9));

  WindowBuffer two(2);
  two.push(0, 1.0);
  two.push(0, 0.0);
  two.push(0, 1.0);
  CHECK(swucb_mean(two, 0) == doctest::Approx(0.5));
  CHECK(two.count(0) == 2);

  WindowBuffer multi(8);
  for (int i = 0; i < 100; ++i) multi.push(i % 3, 0.5);
  CHECK(multi.count(0) + multi.count(1) + multi.count(2) == 8);

  // Pad uses the elapsed time capped by the window length.
  WindowBuffer padBuf(4);
  padBuf.push(0, 1.0);
  padBuf.push(0, 0.0);
  CHECK(swucb_pad(padBuf, 0, 1.0, 0.5, 10) ==
        doctest::Approx(0.5887050112577373).epsilon(1e-12));
  CHECK(swucb_pad(padBuf, 0, 1.0, 0.5, 3) ==
        doctest::Approx(std::sqrt(0.5 * std::log(3.0) / 2.0)).epsilon(1e-12));
  CHECK(swucb_mean(padBuf, 1) == kInf);
  CHECK(swucb_pad(padBuf, 1, 1.0, 0.5, 10) == kInf);

  CHECK_THROWS_AS(WindowBuffer(0), std::invalid_argument);
}

TEST_CASE("mean shift detector never alarms on a constant stream") {
  PhState state;
  state.delta = 0.0;
  state.lambda = 1e-6;
  for (int i = 0; i < 10000; ++i) {
    CHECK_FALSE(ph_update(state, 0.7));
  }
}

TEST_CASE("mean shift detector alarms after a level change") {
  PhState state;
  state.delta = 0.05;
  state.lambda = 1.0;
  std::uint64_t alarmAt = 0;
  for (int i = 1; i <= 200; ++i) {
    double x = i <= 100 ? 0.0 : 1.0;
    if (ph_update(state, x)) {
      alarmAt = i;
      break;
    }
  }
  CHECK(alarmAt == 102);

  // Affine scale covariance: scaling the stream, the drift allowance, and
  // the threshold by the same factor preserves the alarm step exactly.
  PhState scaled;
  scaled.delta = 0.05 * 4.0;
  scaled.lambda = 1.0 * 4.0;
  std::uint64_t scaledAt = 0;
  for (int i = 1; i <= 200; ++i) {
    double x = i <= 100 ? 0.0 : 4.0;
    if (ph_update(scaled, x)) {
      scaledAt = i;
      break;
    }
  }
  CHECK(scaledAt == 102);

  PhState lax;
  lax.delta = 0.05;
  lax.lambda = 1e9;
  for (int i = 1; i <= 200; ++i) {
    CHECK_FALSE(ph_update(lax, i <= 100 ? 0.0 : 1.0));
  }

  PhState bad;
  bad.delta = -0.1;
  CHECK_THROWS_AS(ph_update(bad, 0.5), std::domain_error);
  PhState bad2;
  bad2.lambda = 0.0;
  CHECK_THROWS_AS(ph_update(bad2, 0.5), std::domain_error);
}

TEST_CASE("kalman filter worked examples") {
  KalmanArm arm;  // mu 0, var 1
  kalman_update(arm, 1.0, 1.0, 0.0);
  CHECK(arm.mu == doctest::Approx(0.5));
  CHECK(arm.var == doctest::Approx(0.5));

  // Equal prior and observation noise average the estimate and the sample.
  KalmanArm sym;
  sym.mu = 0.3;
  sym.var = 0.2;
  kalman_update(sym, 0.9, 0.2, 0.0);
  CHECK(sym.mu == doctest::Approx(0.6).epsilon(1e-12));

  // A fully confident estimate ignores new data when nothing drifts.
  KalmanArm frozen;
  frozen.mu = 0.4;
  frozen.var = 0.0;
  kalman_update(frozen, 99.0, 0.5, 0.0);
  CHECK(frozen.mu == doctest::Approx(0.4));
  CHECK(frozen.var == doctest::Approx(0.0));

  KalmanArm idle;
  idle.var = 0.3;
  kalman_idle(idle, 0.05);
  CHECK(idle.var == doctest::Approx(0.35));

  CHECK_THROWS_AS(kalman_update(idle, 0.5, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(kalman_update(idle, 0.5, 1.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(kalman_idle(idle, -0.1), std::domain_error);
}

TEST_CASE("kalman variance converges") {
  // Without drift the posterior variance contracts to zero.
  KalmanArm still;
  double prev = still.var;
  for (int i = 0; i < 60; ++i) {
    kalman_update(still, 0.5, 0.25, 0.0);
    CHECK(still.var < prev);
    prev = still.var;
  }
  CHECK(still.var < 1e-2);

  // With drift it settles at the positive root of
  // v = (v + tr) * ob / (v + tr + ob).
  KalmanArm drift;
  for (int i = 0; i < 2000; ++i) kalman_update(drift, 0.5, 0.25, 0.01);
  CHECK(drift.var == doctest::Approx(0.04524937810560445).epsilon(1e-9));
}

TEST_CASE("kalman policy initialization and modes") {
  KalmanPolicy policy(2, 0.25, 0.01, 0.0, 1.0,
                      KalmanPolicy::Mode::UpperConfidence);
  RngStream rng(13, 0);
  auto d = policy.select(1, rng);
  REQUIRE(d.scores.size() == 2);
  // Prior: mu at the midpoint, sd at half the range, bonus 2 sd.
  CHECK(d.scores[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(d.scores[1] == doctest::Approx(1.5).epsilon(1e-12));

  CHECK_THROWS_AS(KalmanPolicy(0, 0.25, 0.01, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(KalmanPolicy(2, 0.0, 0.01, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(KalmanPolicy(2, 0.25, -0.1, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(KalmanPolicy(2, 0.25, 0.01, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("drift aware index policies track a hard switch") {
  int ducbGood = 0, swucbGood = 0, kalmanGood = 0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    auto env1 = makeSwitchEnv(1001);
    DiscountedUcbPolicy ducb(2, 0.995);
    if (lateBestShare(ducb, env1, 2000, 200, 100 + s) > 0.8) ducbGood += 1;

    auto env2 = makeSwitchEnv(1001);
    SlidingWindowUcbPolicy swucb(2, 200);
    if (lateBestShare(swucb, env2, 2000, 200, 200 + s) > 0.8) swucbGood += 1;

    auto env3 = makeSwitchEnv(1001);
    KalmanPolicy kal(2, 0.25, 0.01, 0.0, 1.0);
    if (lateBestShare(kal, env3, 2000, 200, 300 + s) > 0.8) kalmanGood += 1;
  }
  CHECK(ducbGood >= 9);
  CHECK(swucbGood >= 9);
  CHECK(kalmanGood >= 9);

  CHECK_THROWS_AS(DiscountedUcbPolicy(2, 0.995, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(DiscountedUcbPolicy(2, 0.995, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SlidingWindowUcbPolicy(0, 100), std::invalid_argument);
  CHECK_THROWS_AS(SlidingWindowUcbPolicy(2, 0), std::invalid_argument);
}

TEST_CASE("changepoint meta policy without alarms matches its inner policy") {
  std::vector<StochasticArmSpec> arms = {StochasticArmSpec::bernoulli(0.9),
                                         StochasticArmSpec::bernoulli(0.6)};
  StochasticEnv envA(arms), envB(arms);
  AdaptEvePolicy meta(2, 0.005, 1e9, 200);
  UcbTunedPolicy plain(2);
  RngStream envRngA(21, 0, 0), envRngB(21, 0, 0);
  RngStream polRngA(21, 0, 1), polRngB(21, 0, 1);
  for (std::uint64_t t = 1; t <= 5000; ++t) {
    auto da = meta.select(t, polRngA);
    auto db = plain.select(t, polRngB);
    REQUIRE(da.arms.front() == db.arms.front());
    double ra = envA.sampleReward(da.arms.front(), t, envRngA);
    double rb = envB.sampleReward(db.arms.front(), t, envRngB);
    REQUIRE(ra == rb);
    meta.observe(t, da, {ra});
    plain.observe(t, db, {rb});
  }
  CHECK(meta.alarmCount() == 0);
}

TEST_CASE("changepoint meta policy recovers from a regime change") {
  int good = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    auto env = makeSwitchEnv(1501);
    AdaptEvePolicy policy(2, 0.02, 8.0, 150);
    double share = lateBestShare(policy, env, 3000, 300, 400 + s);
    if (policy.alarmCount() >= 1 && share > 0.8) good += 1;
  }
  CHECK(good >= 16);

  CHECK_THROWS_AS(AdaptEvePolicy(0), std::invalid_argument);
  CHECK_THROWS_AS(AdaptEvePolicy(2, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(AdaptEvePolicy(2, 0.005, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(AdaptEvePolicy(2, 0.005, 50.0, 0), std::invalid_argument);
}

TEST_CASE("drift guarded exponential weights match the plain version when the margin is slack") {
  std::vector<StochasticArmSpec> arms = {StochasticArmSpec::bernoulli(0.7),
                                         StochasticArmSpec::bernoulli(0.4)};
  StochasticEnv envA(arms), envB(arms);
  Exp3RPolicy guarded(2, 0.2, 50, 5.0);
  Exp3Policy plain(2, 0.2);
  RngStream envRngA(22, 0, 0), envRngB(22, 0, 0);
  RngStream polRngA(22, 0, 1), polRngB(22, 0, 1);
  for (std::uint64_t t = 1; t <= 4000; ++t) {
    auto da = guarded.select(t, polRngA);
    auto db = plain.select(t, polRngB);
    REQUIRE(da.arms.front() == db.arms.front());
    double r = envA.sampleReward(da.arms.front(), t, envRngA);
    double rB = envB.sampleReward(db.arms.front(), t, envRngB);
    REQUIRE(r == rB);
    guarded.observe(t, da, {r});
    plain.observe(t, db, {rB});
  }
  CHECK(guarded.resetCount() == 0);
}

TEST_CASE("drift guarded exponential weights reset after a hard switch") {
  int withReset = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    NonstationaryEnv::Segment first, second;
    first.start = 1;
    first.arms = {StochasticArmSpec::bernoulli(0.9),
                  StochasticArmSpec::bernoulli(0.1)};
    second.start = 2501;
    second.arms = {StochasticArmSpec::bernoulli(0.1),
                   StochasticArmSpec::bernoulli(0.9)};
    NonstationaryEnv env({first, second});
    Exp3RPolicy policy(2, 0.2, 100, 0.2);
    RngStream envRng(500 + s, 0, 0);
    RngStream polRng(500 + s, 0, 1);
    for (std::uint64_t t = 1; t <= 5000; ++t) {
      auto d = policy.select(t, polRng);
      double r = env.sampleReward(d.arms.front(), t, envRng);
      policy.observe(t, d, {r});
    }
    if (policy.resetCount() >= 1) withReset += 1;
  }
  CHECK(withReset >= 17);

  CHECK_THROWS_AS(Exp3RPolicy(2, 0.2, 0), std::invalid_argument);
  CHECK_THROWS_AS(Exp3RPolicy(2, 0.2, 100, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Exp3RPolicy(2, 1.5), std::invalid_argument);
}
