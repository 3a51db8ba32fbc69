#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "bandit/environment.hpp"
#include "bandit/extended.hpp"
#include "bandit/rng.hpp"

using namespace bandit;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

PosteriorBank bernoulliBank(const std::vector<std::pair<double, double>>& ab) {
  PosteriorBank bank;
  bank.model = PosteriorBank::Model::Bernoulli;
  for (auto [a, b] : ab) bank.beta.push_back({a, b});
  return bank;
}
}  // namespace

TEST_CASE("partition node score worked examples") {
  CHECK(hoo_uvalue(0.5, 0, 10, 1, 0.5, 1.0) == kInf);
  // ln 1 = 0 kills the count bonus; depth 0 keeps the full diameter term.
  CHECK(hoo_uvalue(0.0, 1, 1, 0, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(hoo_uvalue(0.5, 2, 7, 2, 0.5, 1.0) ==
        doctest::Approx(2.1449588341794583).epsilon(1e-12));
  CHECK(hoo_uvalue(0.3, 4, 100, 3, 0.5, 2.0) ==
        doctest::Approx(2.0674271293851465).epsilon(1e-12));
  // Diameter term shrinks geometrically with depth.
  double shallow = hoo_uvalue(0.5, 4, 100, 1, 0.5, 1.0);
  double deep = hoo_uvalue(0.5, 4, 100, 6, 0.5, 1.0);
  CHECK(shallow - deep == doctest::Approx(0.5 - std::pow(0.5, 6)));
}

TEST_CASE("partition search grows one split per step") {
  HooPolicy policy(0.5, 1.0);
  RngStream rng(31, 0);
  CHECK(policy.nodes().size() == 1);
  for (std::uint64_t t = 1; t <= 100; ++t) {
    double x = policy.selectPoint(t, rng);
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    policy.observe(x, 0.5);
    CHECK(policy.nodes().size() == 1 + 2 * t);
  }
  CHECK(policy.totalPlays() == 100);

  CHECK_THROWS_AS(HooPolicy(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(HooPolicy(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(HooPolicy(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("partition tree invariants hold during a run") {
  HooPolicy policy(0.5, 1.0);
  RngStream rng(32, 0);
  for (std::uint64_t t = 1; t <= 300; ++t) {
    double x = policy.selectPoint(t, rng);
    policy.observe(x, x < 0.5 ? 1.0 : 0.0);
  }
  const auto& nodes = policy.nodes();
  for (const auto& node : nodes) {
    if (node.left < 0) {
      CHECK(node.b == node.u);
      continue;
    }
    const auto& l = nodes[node.left];
    const auto& r = nodes[node.right];
    // Children tile the parent cell at the next depth.
    CHECK(l.lo == node.lo);
    CHECK(r.hi == node.hi);
    CHECK(l.hi == r.lo);
    CHECK(l.depth == node.depth + 1);
    CHECK(r.depth == node.depth + 1);
    // Tighter of own optimism and best child.
    CHECK(node.b <= node.u);
    CHECK(node.b <= std::max(l.b, r.b));
    CHECK(node.b == doctest::Approx(std::min(node.u, std::max(l.b, r.b))));
  }
}

TEST_CASE("partition search concentrates where rewards are") {
  // Left half pays 1, right half pays 0: late play should sit on the left.
  HooPolicy policy(0.5, 1.0);
  RngStream rng(33, 0);
  int lateLeft = 0;
  for (std::uint64_t t = 1; t <= 400; ++t) {
    double x = policy.selectPoint(t, rng);
    policy.observe(x, x < 0.5 ? 1.0 : 0.0);
    if (t > 300 && x < 0.5) lateLeft += 1;
  }
  CHECK(double(lateLeft) / 100.0 > 0.9);
  CHECK(policy.recommend() < 0.5);
}

TEST_CASE("partition search localizes a triangle peak") {
  int good = 0;
  for (int s = 0; s < 5; ++s) {
    ContinuumEnv env(ContinuumEnv::MeanFn::Triangle, 0.7, 0.9,
                     ContinuumEnv::Noise::Bernoulli);
    HooPolicy policy(0.5, 1.0);
    RngStream envRng(40 + s, 0, 0);
    RngStream polRng(40 + s, 0, 1);
    for (std::uint64_t t = 1; t <= 2000; ++t) {
      double x = policy.selectPoint(t, polRng);
      policy.observe(x, env.sampleAt(x, envRng));
    }
    if (std::abs(policy.recommend() - 0.7) <= 0.1) good += 1;
  }
  CHECK(good >= 4);
}

TEST_CASE("multiple play posterior selection reduces to single play") {
  auto bank = bernoulliBank({{2.0, 3.0}, {5.0, 1.0}, {1.0, 1.0}});
  for (int i = 0; i < 500; ++i) {
    RngStream a(50, i), b(50, i);
    auto viaMp = mp_ts_select(bank, 1, a);
    auto viaTs = thompson_select(bank, b);
    REQUIRE(viaMp.arms.front() == viaTs.arms.front());
  }
}

TEST_CASE("multiple play posterior selection picks distinct top arms") {
  auto bank =
      bernoulliBank({{1000.0, 1.0}, {500.0, 500.0}, {1.0, 1000.0}});
  RngStream rng(51, 0);
  int topPair = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    auto d = mp_ts_select(bank, 2, rng);
    REQUIRE(d.arms.size() == 2);
    REQUIRE(d.arms[0] != d.arms[1]);
    std::set<ArmId> got(d.arms.begin(), d.arms.end());
    if (got == std::set<ArmId>{0, 1}) topPair += 1;
  }
  CHECK(double(topPair) / n > 0.99);

  auto all = mp_ts_select(bank, 3, rng);
  CHECK(std::set<ArmId>(all.arms.begin(), all.arms.end()).size() == 3);

  CHECK_THROWS_AS(mp_ts_select(bank, 0, rng), std::domain_error);
  CHECK_THROWS_AS(mp_ts_select(bank, 4, rng), std::domain_error);
}

TEST_CASE("improved multiple play selection exploits means then samples") {
  auto bank = bernoulliBank({{1.0, 1.0}, {2.0, 1.0}, {1.0, 1.0}});
  std::vector<ArmStats> stats(3);
  update_stats(stats[0], 0.9);
  update_stats(stats[0], 0.9);
  update_stats(stats[1], 0.5);
  update_stats(stats[2], 0.4);

  RngStream rng(52, 0);
  int armOneInLastSlot = 0;
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    auto d = imp_ts_select(bank, stats, 2, rng);
    REQUIRE(d.arms.size() == 2);
    REQUIRE(d.arms[0] == 0);  // highest empirical mean always leads
    REQUIRE(d.arms[1] != 0);
    if (d.arms[1] == 1) armOneInLastSlot += 1;
  }
  // Last slot compares posterior draws Beta(2,1) vs Beta(1,1): 2/3 odds.
  CHECK(double(armOneInLastSlot) / n ==
        doctest::Approx(2.0 / 3.0).epsilon(0.03));

  // m = K covers every arm.
  auto all = imp_ts_select(bank, stats, 3, rng);
  CHECK(std::set<ArmId>(all.arms.begin(), all.arms.end()).size() == 3);

  std::vector<ArmStats> tooFew(2);
  CHECK_THROWS_AS(imp_ts_select(bank, tooFew, 2, rng), std::domain_error);
  CHECK_THROWS_AS(imp_ts_select(bank, stats, 0, rng), std::domain_error);

  // m = 1 is plain posterior sampling.
  for (int i = 0; i < 200; ++i) {
    RngStream a(53, i), b(53, i);
    auto viaImp = imp_ts_select(bank, stats, 1, a);
    auto viaTs = thompson_select(bank, b);
    REQUIRE(viaImp.arms.front() == viaTs.arms.front());
  }
}

TEST_CASE("multiple play policies update every played arm") {
  MpTsPolicy policy(3, 2, PosteriorBank::Model::Bernoulli);
  RngStream rng(54, 0);
  auto d = policy.select(1, rng);
  REQUIRE(d.arms.size() == 2);
  policy.observe(1, d, {1.0, 0.0});
  double total = 0.0;
  for (const auto& p : policy.bank().beta) total += p.a + p.b;
  // 3 arms at (1,1) plus one success and one failure.
  CHECK(total == doctest::Approx(8.0));
  CHECK(policy.bank().beta[d.arms[0]].a == doctest::Approx(2.0));
  CHECK(policy.bank().beta[d.arms[1]].b == doctest::Approx(2.0));
  CHECK(policy.playsPerStep() == 2);

  CHECK_THROWS_AS(MpTsPolicy(0, 1, PosteriorBank::Model::Bernoulli),
                  std::invalid_argument);
  CHECK_THROWS_AS(MpTsPolicy(3, 0, PosteriorBank::Model::Bernoulli),
                  std::invalid_argument);
  CHECK_THROWS_AS(MpTsPolicy(3, 4, PosteriorBank::Model::Bernoulli),
                  std::invalid_argument);
  CHECK_THROWS_AS(MpTsPolicy(3, 2, PosteriorBank::Model::Bernoulli, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      MpTsPolicy(3, 2, PosteriorBank::Model::Gaussian, 1.0, 1.0, 0.0, 0.0),
      std::invalid_argument);
}

TEST_CASE("multiple play policies find the top set") {
  std::vector<StochasticArmSpec> arms = {StochasticArmSpec::bernoulli(0.9),
                                         StochasticArmSpec::bernoulli(0.7),
                                         StochasticArmSpec::bernoulli(0.3),
                                         StochasticArmSpec::bernoulli(0.1)};
  for (bool improved : {false, true}) {
    StochasticEnv env(arms);
    std::unique_ptr<MpTsPolicy> policy;
    if (improved)
      policy = std::make_unique<ImpTsPolicy>(4, 2,
                                             PosteriorBank::Model::Bernoulli);
    else
      policy = std::make_unique<MpTsPolicy>(4, 2,
                                            PosteriorBank::Model::Bernoulli);
    RngStream envRng(60 + improved, 0, 0);
    RngStream polRng(60 + improved, 0, 1);
    int lateTop = 0;
    for (std::uint64_t t = 1; t <= 3000; ++t) {
      auto d = policy->select(t, polRng);
      std::vector<double> rewards;
      for (ArmId a : d.arms)
        rewards.push_back(env.sampleReward(a, t, envRng));
      policy->observe(t, d, rewards);
      if (t > 2500) {
        std::set<ArmId> got(d.arms.begin(), d.arms.end());
        if (got == std::set<ArmId>{0, 1}) lateTop += 1;
      }
    }
    CHECK(double(lateTop) / 500.0 > 0.85);
  }
}
