#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bandit/environment.hpp"
#include "bandit/sampling.hpp"

using namespace bandit;

namespace {
PosteriorBank bernoulliBank(const std::vector<std::pair<double, double>>& ab) {
  PosteriorBank bank;
  bank.model = PosteriorBank::Model::Bernoulli;
  for (auto [a, b] : ab) bank.beta.push_back(BetaPosterior{a, b});
  return bank;
}

ArmStats makeStats(std::uint64_t count, double mean) {
  ArmStats s;
  s.count = count;
  s.mean = mean;
  s.sumSquares = mean * mean * static_cast<double>(count);
  return s;
}
}  // namespace

TEST_CASE("thompson sampling frequency oracles") {
  RngStream rng(1, 0);

  auto certain = bernoulliBank({{1e6, 1.0}, {1.0, 1e6}});
  int firstWins = 0;
  for (int i = 0; i < 10000; ++i) {
    if (thompson_select(certain, rng).arms.front() == 0) firstWins += 1;
  }
  CHECK(double(firstWins) / 10000.0 > 0.999);

  auto symmetric = bernoulliBank({{1.0, 1.0}, {1.0, 1.0}});
  int sym = 0;
  for (int i = 0; i < 20000; ++i) {
    if (thompson_select(symmetric, rng).arms.front() == 0) sym += 1;
  }
  CHECK(double(sym) / 20000.0 == doctest::Approx(0.5).epsilon(0.03));

  // P(Beta(2,1) > Beta(1,1)) = 2/3.
  auto skewed = bernoulliBank({{2.0, 1.0}, {1.0, 1.0}});
  int skew = 0;
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    if (thompson_select(skewed, rng).arms.front() == 0) skew += 1;
  }
  CHECK(double(skew) / n == doctest::Approx(2.0 / 3.0).epsilon(0.02));

  auto solo = bernoulliBank({{1.0, 1.0}});
  CHECK(thompson_select(solo, rng).arms.front() == 0);
}

TEST_CASE("optimistic thompson equals plain when posteriors are degenerate") {
  // Tiny prior variance and no data: every draw collapses onto the prior
  // mean, so max(draw, mean) changes nothing and both selectors consume the
  // same rng draws.
  PosteriorBank bank;
  bank.model = PosteriorBank::Model::Gaussian;
  bank.obsVar = 1.0;
  for (double m : {0.2, 0.8, 0.5}) {
    GaussianArmPosterior g;
    g.priorMean = m;
    g.priorVar = 1e-300;
    bank.gauss.push_back(g);
  }
  RngStream a(2, 0);
  RngStream b(2, 0);
  for (int i = 0; i < 500; ++i) {
    auto plain = thompson_select(bank, a);
    auto opt = thompson_select_optimistic(bank, b);
    CHECK(plain.arms == opt.arms);
    CHECK(plain.scores == opt.scores);
  }
}

TEST_CASE("optimistic thompson lifts draws to the posterior mean") {
  // Beta(1,1): draw U ~ Uniform(0,1), effective value max(U, 1/2); its mean
  // is 5/8.
  auto bank = bernoulliBank({{1.0, 1.0}});
  RngStream rng(3, 0);
  double sum = 0.0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    auto d = thompson_select_optimistic(bank, rng);
    REQUIRE(d.scores.size() == 1);
    CHECK(d.scores.front() >= 0.5);
    sum += d.scores.front();
  }
  CHECK(sum / n == doctest::Approx(0.625).epsilon(0.012));
}

TEST_CASE("posterior updates move the bank") {
  auto bank = bernoulliBank({{1.0, 1.0}});
  bank.update(0, 1.0);
  CHECK(bank.beta[0].a == doctest::Approx(2.0));
  CHECK(bank.beta[0].b == doctest::Approx(1.0));
  bank.update(0, 0.0);
  CHECK(bank.beta[0].a == doctest::Approx(2.0));
  CHECK(bank.beta[0].b == doctest::Approx(2.0));
  CHECK(bank.posteriorMean(0) == doctest::Approx(0.5));

  PosteriorBank gauss;
  gauss.model = PosteriorBank::Model::Gaussian;
  gauss.gauss.resize(1);
  CHECK(gauss.obsVar == doctest::Approx(1.0));
  gauss.update(0, 4.0);
  // One observation: no residual degrees of freedom, variance unchanged.
  CHECK(gauss.obsVar == doctest::Approx(1.0));
  gauss.update(0, 4.0);
  // Constant rewards: pooled residual variance floors at 1e-6.
  CHECK(gauss.obsVar == doctest::Approx(1e-6));
  // Posterior mean shrinks from the prior toward the data.
  CHECK(gauss.gauss[0].posteriorMean(gauss.obsVar) ==
        doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("poker gap estimate worked examples") {
  CHECK(poker_delta({0.42}) == doctest::Approx(0.0));
  CHECK(poker_delta({0.9, 0.7, 0.5, 0.1}) == doctest::Approx(0.1).epsilon(1e-12));
  std::vector<double> nine = {0.8, 0.6, 0.5, 0.45, 0.4, 0.35, 0.3, 0.2, 0.1};
  CHECK(poker_delta(nine) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(poker_delta({}), std::domain_error);
}

TEST_CASE("poker score worked examples") {
  // At the horizon the future weight vanishes: score equals the mean.
  CHECK(poker_score(makeStats(3, 0.42), 0.2, 0.9, 0.1, 100, 100) ==
        doctest::Approx(0.42).epsilon(1e-12));

  // mean 0.5, se 0.1, threshold 0.6, 10 steps left: 0.5 + Phi(-1).
  CHECK(poker_score(makeStats(1, 0.5), 0.1, 0.5, 0.1, 11, 1) ==
        doctest::Approx(0.6586552539314571).epsilon(1e-9));

  // Mean exactly at the threshold contributes half the future mass.
  CHECK(poker_score(makeStats(4, 0.6), 0.0, 0.5, 0.1, 21, 1) ==
        doctest::Approx(0.6 + 0.5 * 0.1 * 20.0).epsilon(1e-12));
  // Zero se above threshold: full mass.
  CHECK(poker_score(makeStats(4, 0.8), 0.0, 0.5, 0.1, 21, 1) ==
        doctest::Approx(0.8 + 0.1 * 20.0).epsilon(1e-12));
  // Zero se below threshold: no future term.
  CHECK(poker_score(makeStats(4, 0.3), 0.0, 0.5, 0.1, 21, 1) ==
        doctest::Approx(0.3).epsilon(1e-12));

  CHECK_THROWS_AS(poker_score(makeStats(0, 0.0), 0.1, 0.5, 0.1, 10, 1),
                  std::domain_error);
}

TEST_CASE("besa duel equal-length histories compare means directly") {
  RngStream rng(4, 0);
  RngStream probe(4, 0);
  CHECK(besa_duel({0.8, 0.8}, {0.2, 0.2}, rng) == 0);
  CHECK(besa_duel({0.1, 0.1}, {0.9, 0.9}, rng) == 1);
  // No rng consumed on decisive equal-length duels.
  CHECK(rng.nextU32() == probe.nextU32());
}

TEST_CASE("besa duel tie goes to the less-played history") {
  RngStream rng(5, 0);
  for (int i = 0; i < 50; ++i) {
    CHECK(besa_duel({1.0, 1.0, 1.0, 1.0}, {1.0}, rng) == 1);
    CHECK(besa_duel({1.0}, {1.0, 1.0, 1.0, 1.0}, rng) == 0);
  }
  CHECK_THROWS_AS(besa_duel({}, {0.5}, rng), std::domain_error);
}

TEST_CASE("besa duel subsample distribution matches enumeration") {
  // histA has three 1s and two 0s; size-2 subsamples beat the constant 0.5
  // opponent only when both picks are 1: P = (3*2)/(5*4) = 0.3. All ties go
  // to the shorter history.
  std::vector<double> histA = {1.0, 0.0, 1.0, 0.0, 1.0};
  std::vector<double> histB = {0.5, 0.5};
  RngStream rng(6, 0);
  int aWins = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    if (besa_duel(histA, histB, rng) == 0) aWins += 1;
  }
  CHECK(double(aWins) / n == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("besa tournament respects dominance and byes stay fair") {
  RngStream rng(7, 0);
  // Arm 0 wins every duel it can appear in.
  std::vector<std::vector<double>> dom = {
      {1.0, 1.0, 1.0}, {0.4, 0.4}, {0.2, 0.2, 0.2}, {0.0}};
  for (int i = 0; i < 500; ++i) {
    CHECK(besa_tournament(dom, rng) == 0);
  }

  // Identical single-entry histories: every duel is a fair coin, and the
  // random bracket makes the overall winner uniform across three arms.
  std::vector<std::vector<double>> same = {{0.5}, {0.5}, {0.5}};
  std::vector<int> wins(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) wins[besa_tournament(same, rng)] += 1;
  for (int w : wins) {
    CHECK(double(w) / n == doctest::Approx(1.0 / 3.0).epsilon(0.05));
  }

  CHECK(besa_tournament({{0.3}}, rng) == 0);
  CHECK_THROWS_AS(besa_tournament({}, rng), std::domain_error);
}

TEST_CASE("thompson policy learns the best arm") {
  ThompsonPolicy policy(2, PosteriorBank::Model::Bernoulli);
  StochasticEnv env({StochasticArmSpec::bernoulli(0.8),
                     StochasticArmSpec::bernoulli(0.2)});
  RngStream envRng(8, 0, 0);
  RngStream polRng(8, 0, 1);
  int best = 0;
  const std::uint64_t H = 2000;
  for (std::uint64_t t = 1; t <= H; ++t) {
    auto d = policy.select(t, polRng);
    if (d.arms.front() == 0) best += 1;
    policy.observe(t, d, {env.sampleReward(d.arms.front(), t, envRng)});
  }
  CHECK(double(best) / double(H) > 0.85);
  // The bank absorbed every observation.
  double a = policy.bank().beta[0].a + policy.bank().beta[0].b +
             policy.bank().beta[1].a + policy.bank().beta[1].b;
  CHECK(a == doctest::Approx(4.0 + double(H)));
}

TEST_CASE("gaussian thompson policy handles unbounded rewards") {
  ThompsonPolicy policy(2, PosteriorBank::Model::Gaussian, false, 1.0, 1.0,
                        0.0, 1.0);
  StochasticEnv env({StochasticArmSpec::gaussian(1.5, 0.5),
                     StochasticArmSpec::gaussian(-0.5, 0.5)});
  RngStream envRng(9, 0, 0);
  RngStream polRng(9, 0, 1);
  int best = 0;
  const std::uint64_t H = 1000;
  for (std::uint64_t t = 1; t <= H; ++t) {
    auto d = policy.select(t, polRng);
    if (d.arms.front() == 0) best += 1;
    policy.observe(t, d, {env.sampleReward(d.arms.front(), t, envRng)});
  }
  CHECK(double(best) / double(H) > 0.8);
}

TEST_CASE("poker policy plays and improves on a spread instance") {
  const std::uint64_t H = 3000;
  PokerPolicy policy(5, H);
  StochasticEnv env({StochasticArmSpec::bernoulli(0.9),
                     StochasticArmSpec::bernoulli(0.7),
                     StochasticArmSpec::bernoulli(0.5),
                     StochasticArmSpec::bernoulli(0.3),
                     StochasticArmSpec::bernoulli(0.1)});
  RngStream envRng(10, 0, 0);
  RngStream polRng(10, 0, 1);
  double total = 0.0;
  int bestLate = 0;
  for (std::uint64_t t = 1; t <= H; ++t) {
    auto d = policy.select(t, polRng);
    double r = env.sampleReward(d.arms.front(), t, envRng);
    total += r;
    if (t > H / 2 && d.arms.front() == 0) bestLate += 1;
    policy.observe(t, d, {r});
  }
  // Far better than uniform play (expected 0.5 per step).
  CHECK(total / double(H) > 0.7);
  CHECK(double(bestLate) / double(H / 2) > 0.6);
  CHECK_THROWS_AS(PokerPolicy(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(PokerPolicy(3, 0), std::invalid_argument);
}

TEST_CASE("besa policy concentrates on the better arm") {
  BesaPolicy policy(2);
  StochasticEnv env({StochasticArmSpec::bernoulli(0.8),
                     StochasticArmSpec::bernoulli(0.3)});
  RngStream envRng(11, 0, 0);
  RngStream polRng(11, 0, 1);
  int best = 0;
  const std::uint64_t H = 2000;
  for (std::uint64_t t = 1; t <= H; ++t) {
    auto d = policy.select(t, polRng);
    if (d.arms.front() == 0) best += 1;
    policy.observe(t, d, {env.sampleReward(d.arms.front(), t, envRng)});
  }
  CHECK(double(best) / double(H) > 0.75);
  CHECK_THROWS_AS(BesaPolicy(0), std::invalid_argument);
}
