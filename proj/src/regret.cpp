#include "bandit/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bandit/math.hpp"

namespace bandit {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double selectedOracleSum(const PullEntry& e, const Environment& env) {
  double s = 0.0;
  for (ArmId a : e.arms) s += env.expectedReward(a, e.step);
  return s;
}

std::vector<std::vector<double>> perArmRewards(const PullLog& log,
                                               std::size_t numArms) {
  std::vector<std::vector<double>> rewards(numArms);
  for (const auto& e : log.entries()) {
    if (e.arms.empty())
      throw std::domain_error("statistical regret needs discrete-armed plays");
    for (std::size_t i = 0; i < e.arms.size(); ++i)
      rewards.at(e.arms[i]).push_back(e.rewards.at(i));
  }
  return rewards;
}

double sortedQuantile(const std::vector<double>& sorted, double q) {
  auto B = sorted.size();
  double pos = std::ceil(q * static_cast<double>(B)) - 1.0;
  auto idx = static_cast<std::size_t>(std::max(0.0, pos));
  return sorted[std::min(idx, B - 1)];
}

}  // namespace

std::vector<double> expected_expected_regret(const PullLog& log,
                                             const Environment& env) {
  std::vector<double> series;
  series.reserve(log.size());
  double cum = 0.0;
  for (const auto& e : log.entries()) {
    double oracle = oracle_top_m(env, e.step, e.arms.size());
    cum += std::max(0.0, oracle - selectedOracleSum(e, env));
    series.push_back(cum);
  }
  return series;
}

std::vector<double> expected_payoff_regret(const PullLog& log,
                                           const Environment& env) {
  std::vector<double> series;
  series.reserve(log.size());
  double cum = 0.0;
  for (const auto& e : log.entries()) {
    double oracle = oracle_top_m(env, e.step, e.arms.size());
    double realized =
        std::accumulate(e.rewards.begin(), e.rewards.end(), 0.0);
    cum += oracle - realized;
    series.push_back(cum);
  }
  return series;
}

std::vector<double> suboptimal_plays(const PullLog& log,
                                     const Environment& env) {
  std::vector<double> series;
  series.reserve(log.size());
  double cum = 0.0;
  for (const auto& e : log.entries()) {
    double oracle = oracle_top_m(env, e.step, e.arms.size());
    if (selectedOracleSum(e, env) + 1e-12 < oracle) cum += 1.0;
    series.push_back(cum);
  }
  return series;
}

std::pair<std::vector<double>, std::vector<double>> statistical_regret(
    const PullLog& log, std::size_t numArms, double gammaConf,
    StatMethod method, std::size_t bootstrapB, RngStream& rng) {
  if (!(gammaConf >= 0.0 && gammaConf < 1.0))
    throw std::domain_error("confidence level must lie in [0,1)");
  std::vector<double> lo(log.size(), kNan), hi(log.size(), kNan);
  auto rewards = perArmRewards(log, numArms);
  std::uint64_t minPlays = method == StatMethod::Parametric ? 2 : 1;
  for (const auto& r : rewards)
    if (r.size() < minPlays) return {lo, hi};  // undefined marker

  std::vector<double> armLo(numArms), armHi(numArms);
  for (std::size_t a = 0; a < numArms; ++a) {
    const auto& r = rewards[a];
    auto n = static_cast<double>(r.size());
    if (method == StatMethod::Parametric) {
      double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
      double ss = 0.0;
      for (double x : r) ss += (x - mean) * (x - mean);
      double sd = std::sqrt(ss / (n - 1.0));
      double z = normal_quantile(0.5 * (1.0 + gammaConf));
      double half = z * sd / std::sqrt(n);
      armLo[a] = mean - half;
      armHi[a] = mean + half;
    } else {
      if (bootstrapB == 0)
        throw std::domain_error("bootstrap needs at least one resample");
      std::vector<double> means(bootstrapB);
      for (std::size_t b = 0; b < bootstrapB; ++b) {
        double sum = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k)
          sum += r[rng.uniformIndex(r.size())];
        means[b] = sum / n;
      }
      std::sort(means.begin(), means.end());
      armLo[a] = sortedQuantile(means, 0.5 * (1.0 - gammaConf));
      armHi[a] = sortedQuantile(means, 0.5 * (1.0 + gammaConf));
    }
  }
  // Sum of the m largest interval ends, for multi-play oracle analogues.
  std::vector<double> loSorted = armLo, hiSorted = armHi;
  std::sort(loSorted.begin(), loSorted.end(), std::greater<>());
  std::sort(hiSorted.begin(), hiSorted.end(), std::greater<>());
  std::vector<double> loPrefix(numArms + 1, 0.0), hiPrefix(numArms + 1, 0.0);
  for (std::size_t i = 0; i < numArms; ++i) {
    loPrefix[i + 1] = loPrefix[i] + loSorted[i];
    hiPrefix[i + 1] = hiPrefix[i] + hiSorted[i];
  }
  double cumLo = 0.0, cumHi = 0.0;
  std::size_t i = 0;
  for (const auto& e : log.entries()) {
    double realized =
        std::accumulate(e.rewards.begin(), e.rewards.end(), 0.0);
    cumLo += loPrefix[e.arms.size()] - realized;
    cumHi += hiPrefix[e.arms.size()] - realized;
    lo[i] = cumLo;
    hi[i] = cumHi;
    i += 1;
  }
  return {lo, hi};
}

std::vector<double> weak_regret(const PullLog& log,
                                const AdversarialEnv& env) {
  if (log.size() > env.horizon())
    throw std::domain_error("log longer than the reward table");
  // Best fixed arm over the whole table horizon.
  std::size_t K = env.numArms();
  std::vector<double> totals(K, 0.0);
  for (std::uint64_t t = 1; t <= env.horizon(); ++t)
    for (std::size_t j = 0; j < K; ++j) totals[j] += env.expectedReward(j, t);
  std::size_t best =
      std::max_element(totals.begin(), totals.end()) - totals.begin();
  std::vector<double> series;
  series.reserve(log.size());
  double cum = 0.0;
  for (const auto& e : log.entries()) {
    double realized =
        std::accumulate(e.rewards.begin(), e.rewards.end(), 0.0);
    cum += env.expectedReward(best, e.step) - realized;
    series.push_back(cum);
  }
  return series;
}

}  // namespace bandit
