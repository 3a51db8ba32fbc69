#include "bandit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "bandit/math.hpp"

namespace bandit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double GaussianArmPosterior::posteriorMean(double obsVar) const {
  double precision = 1.0 / priorVar + static_cast<double>(n) / obsVar;
  return (priorMean / priorVar + sum / obsVar) / precision;
}

double GaussianArmPosterior::posteriorVar(double obsVar) const {
  return 1.0 / (1.0 / priorVar + static_cast<double>(n) / obsVar);
}

double PosteriorBank::posteriorMean(std::size_t arm) const {
  if (model == Model::Bernoulli) return beta.at(arm).mean();
  return gauss.at(arm).posteriorMean(obsVar);
}

double PosteriorBank::drawPosterior(std::size_t arm, RngStream& rng) const {
  if (model == Model::Bernoulli) {
    const BetaPosterior& p = beta.at(arm);
    return rng.beta(p.a, p.b);
  }
  const GaussianArmPosterior& p = gauss.at(arm);
  return p.posteriorMean(obsVar) +
         std::sqrt(p.posteriorVar(obsVar)) * rng.gaussian();
}

void PosteriorBank::update(std::size_t arm, double reward) {
  if (model == Model::Bernoulli) {
    beta.at(arm).update(reward);
    return;
  }
  gauss.at(arm).update(reward);
  // Pooled within-arm residual variance across all played arms.
  double ss = 0.0;
  std::uint64_t total = 0;
  std::size_t played = 0;
  for (const auto& g : gauss) {
    if (g.n == 0) continue;
    double mean = g.sum / static_cast<double>(g.n);
    ss += g.sumSquares - static_cast<double>(g.n) * mean * mean;
    total += g.n;
    played += 1;
  }
  if (total <= played) return;  // no residual degrees of freedom yet
  obsVar = std::max(ss / static_cast<double>(total - played), 1e-6);
}

PolicyDecision thompson_select(const PosteriorBank& bank, RngStream& rng) {
  std::vector<double> draws(bank.size());
  for (std::size_t i = 0; i < draws.size(); ++i)
    draws[i] = bank.drawPosterior(i, rng);
  PolicyDecision d;
  d.arms = {argmax_tiebreak(draws, rng)};
  d.scores = std::move(draws);
  return d;
}

PolicyDecision thompson_select_optimistic(const PosteriorBank& bank,
                                          RngStream& rng) {
  std::vector<double> draws(bank.size());
  for (std::size_t i = 0; i < draws.size(); ++i)
    draws[i] = std::max(bank.drawPosterior(i, rng), bank.posteriorMean(i));
  PolicyDecision d;
  d.arms = {argmax_tiebreak(draws, rng)};
  d.scores = std::move(draws);
  return d;
}

double poker_delta(const std::vector<double>& sortedMeansDesc) {
  if (sortedMeansDesc.empty())
    throw std::domain_error("poker_delta: empty mean list");
  auto K = sortedMeansDesc.size();
  auto idx = static_cast<std::size_t>(
      std::floor(std::sqrt(static_cast<double>(K))));
  if (idx < 1) idx = 1;
  return (sortedMeansDesc.front() - sortedMeansDesc[idx - 1]) /
         std::sqrt(static_cast<double>(K));
}

double poker_score(const ArmStats& stats, double sigma, double bestMean,
                   double delta, std::uint64_t H, std::uint64_t t) {
  if (stats.count == 0) throw std::domain_error("poker_score: arm unplayed");
  double remaining = t < H ? static_cast<double>(H - t) : 0.0;
  double threshold = bestMean + delta;
  double se = sigma / std::sqrt(static_cast<double>(stats.count));
  double tail;
  if (se == 0.0) {
    tail = stats.mean > threshold ? 1.0
           : stats.mean == threshold ? 0.5
                                     : 0.0;
  } else {
    tail = normal_cdf((stats.mean - threshold) / se);
  }
  return stats.mean + delta * remaining * tail;
}

namespace {

// Mean of a size-m without-replacement subsample (or the full mean when the
// history already has length m).
double subsampleMean(const std::vector<double>& hist, std::size_t m,
                     RngStream& rng) {
  if (hist.size() == m)
    return std::accumulate(hist.begin(), hist.end(), 0.0) /
           static_cast<double>(m);
  std::vector<std::size_t> idx(hist.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t j = k + rng.uniformIndex(idx.size() - k);
    std::swap(idx[k], idx[j]);
    total += hist[idx[k]];
  }
  return total / static_cast<double>(m);
}

}  // namespace

std::size_t besa_duel(const std::vector<double>& histA,
                      const std::vector<double>& histB, RngStream& rng) {
  if (histA.empty() || histB.empty())
    throw std::domain_error("besa_duel: empty history");
  std::size_t m = std::min(histA.size(), histB.size());
  double meanA = subsampleMean(histA, m, rng);
  double meanB = subsampleMean(histB, m, rng);
  if (meanA > meanB) return 0;
  if (meanB > meanA) return 1;
  if (histA.size() != histB.size()) return histA.size() < histB.size() ? 0 : 1;
  return rng.uniformIndex(2);
}

ArmId besa_tournament(const std::vector<std::vector<double>>& histories,
                      RngStream& rng) {
  if (histories.empty())
    throw std::domain_error("besa_tournament: no arms");
  std::vector<ArmId> bracket(histories.size());
  std::iota(bracket.begin(), bracket.end(), ArmId{0});
  for (std::size_t k = 0; k + 1 < bracket.size(); ++k) {
    std::size_t j = k + rng.uniformIndex(bracket.size() - k);
    std::swap(bracket[k], bracket[j]);
  }
  while (bracket.size() > 1) {
    std::vector<ArmId> next;
    next.reserve((bracket.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < bracket.size(); i += 2) {
      ArmId a = bracket[i], b = bracket[i + 1];
      next.push_back(besa_duel(histories[a], histories[b], rng) == 0 ? a : b);
    }
    if (bracket.size() % 2 == 1) next.push_back(bracket.back());
    bracket = std::move(next);
  }
  return bracket.front();
}

ThompsonPolicy::ThompsonPolicy(std::size_t K, PosteriorBank::Model model,
                               bool optimistic, double priorA, double priorB,
                               double priorMean, double priorVar)
    : optimistic_(optimistic) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  bank_.model = model;
  if (model == PosteriorBank::Model::Bernoulli) {
    if (!(priorA > 0.0 && priorB > 0.0))
      throw std::invalid_argument("Beta prior parameters must be positive");
    bank_.beta.assign(K, BetaPosterior{priorA, priorB});
  } else {
    if (!(priorVar > 0.0))
      throw std::invalid_argument("prior variance must be positive");
    GaussianArmPosterior p;
    p.priorMean = priorMean;
    p.priorVar = priorVar;
    bank_.gauss.assign(K, p);
  }
}

PolicyDecision ThompsonPolicy::select(std::uint64_t, RngStream& rng) {
  return optimistic_ ? thompson_select_optimistic(bank_, rng)
                     : thompson_select(bank_, rng);
}

void ThompsonPolicy::observe(std::uint64_t, const PolicyDecision& d,
                             const std::vector<double>& rewards) {
  bank_.update(d.arms.front(), rewards.front());
}

PokerPolicy::PokerPolicy(std::size_t K, std::uint64_t H)
    : stats_(K), horizon_(H) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (H == 0) throw std::invalid_argument("horizon must be >= 1");
}

double PokerPolicy::sigmaFor(std::size_t arm) const {
  if (stats_[arm].count >= 2) {
    double v = sample_variance(stats_[arm]);
    if (v > 0.0) return std::sqrt(v);
  }
  // Pooled within-arm variance over arms with at least two plays.
  double ss = 0.0;
  std::uint64_t df = 0;
  for (const auto& s : stats_) {
    if (s.count < 2) continue;
    ss += s.sumSquares - static_cast<double>(s.count) * s.mean * s.mean;
    df += s.count - 1;
  }
  if (df > 0 && ss > 0.0) return std::sqrt(ss / static_cast<double>(df));
  // Overall variance treating every reward as one sample.
  double totalN = 0.0, totalSum = 0.0, totalSq = 0.0;
  for (const auto& s : stats_) {
    totalN += static_cast<double>(s.count);
    totalSum += static_cast<double>(s.count) * s.mean;
    totalSq += s.sumSquares;
  }
  if (totalN >= 2.0) {
    double mean = totalSum / totalN;
    double v = (totalSq - totalN * mean * mean) / (totalN - 1.0);
    if (v > 0.0) return std::sqrt(v);
  }
  return 0.0;
}

PolicyDecision PokerPolicy::select(std::uint64_t t, RngStream& rng) {
  std::vector<double> means;
  means.reserve(stats_.size());
  for (const auto& s : stats_)
    if (s.count > 0) means.push_back(s.mean);
  std::vector<double> scores(stats_.size());
  if (means.empty()) {
    std::fill(scores.begin(), scores.end(), kInf);
  } else {
    std::sort(means.begin(), means.end(), std::greater<>());
    double delta = poker_delta(means);
    double best = means.front();
    for (std::size_t i = 0; i < stats_.size(); ++i)
      scores[i] = stats_[i].count == 0
                      ? kInf
                      : poker_score(stats_[i], sigmaFor(i), best, delta,
                                    horizon_, t);
  }
  PolicyDecision d;
  d.arms = {argmax_tiebreak(scores, rng)};
  d.scores = std::move(scores);
  return d;
}

void PokerPolicy::observe(std::uint64_t, const PolicyDecision& d,
                          const std::vector<double>& rewards) {
  update_stats(stats_.at(d.arms.front()), rewards.front());
}

BesaPolicy::BesaPolicy(std::size_t K) : histories_(K) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
}

PolicyDecision BesaPolicy::select(std::uint64_t, RngStream& rng) {
  PolicyDecision d;
  bool anyUnplayed = false;
  for (const auto& h : histories_)
    if (h.empty()) anyUnplayed = true;
  if (anyUnplayed) {
    std::vector<double> scores(histories_.size(), 0.0);
    for (std::size_t i = 0; i < histories_.size(); ++i)
      if (histories_[i].empty()) scores[i] = kInf;
    d.arms = {argmax_tiebreak(scores, rng)};
    return d;
  }
  d.arms = {besa_tournament(histories_, rng)};
  return d;
}

void BesaPolicy::observe(std::uint64_t, const PolicyDecision& d,
                         const std::vector<double>& rewards) {
  histories_.at(d.arms.front()).push_back(rewards.front());
}

}  // namespace bandit
