#include "bandit/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bandit {

namespace {

constexpr double kWeightGuard = 1e150;

double rescale01(double r, double lo, double hi) {
  if (!(hi > lo)) throw std::domain_error("reward bounds must satisfy lo < hi");
  double rho = (r - lo) / (hi - lo);
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::domain_error("reward outside declared bounds");
  return rho;
}

void guardWeights(std::vector<double>& w) {
  double mx = *std::max_element(w.begin(), w.end());
  if (mx > kWeightGuard)
    for (double& x : w) x /= mx;
}

}  // namespace

ArmId sample_discrete(const std::vector<double>& probs, RngStream& rng) {
  if (probs.empty()) throw std::domain_error("sample_discrete: empty");
  double u = rng.uniform01();
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.size() - 1;
}

std::vector<double> exp3_probs(const Exp3State& state) {
  std::size_t K = state.weights.size();
  double total = std::accumulate(state.weights.begin(), state.weights.end(),
                                 0.0);
  std::vector<double> p(K);
  for (std::size_t i = 0; i < K; ++i)
    p[i] = (1.0 - state.gamma) * state.weights[i] / total +
           state.gamma / static_cast<double>(K);
  return p;
}

void exp3_update(Exp3State& state, ArmId arm, double reward, double pPlayed) {
  if (!(reward >= 0.0 && reward <= 1.0))
    throw std::domain_error("exp3_update: reward outside [0,1]");
  if (!(pPlayed > 0.0)) throw std::domain_error("exp3_update: pPlayed <= 0");
  double K = static_cast<double>(state.weights.size());
  state.weights.at(arm) *= std::exp(state.gamma * reward / (pPlayed * K));
  guardWeights(state.weights);
}

void validate_advice(const AdviceMatrix& advice, std::size_t K) {
  if (advice.empty()) throw std::domain_error("advice: no experts");
  for (const auto& row : advice) {
    if (row.size() != K) throw std::domain_error("advice: row length != K");
    double sum = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) throw std::domain_error("advice: negative entry");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::domain_error("advice: row does not sum to 1");
  }
}

AdviceMatrix make_uniform_advice(std::size_t numExperts, std::size_t K) {
  return AdviceMatrix(numExperts,
                      std::vector<double>(K, 1.0 / static_cast<double>(K)));
}

AdviceMatrix make_point_mass_advice(std::size_t numExperts, std::size_t K) {
  AdviceMatrix advice(numExperts, std::vector<double>(K, 0.0));
  for (std::size_t j = 0; j < numExperts; ++j) advice[j][j % K] = 1.0;
  return advice;
}

std::vector<double> exp4_probs(const std::vector<double>& expertWeights,
                               const AdviceMatrix& advice, double gamma) {
  std::size_t K = advice.front().size();
  double total = std::accumulate(expertWeights.begin(), expertWeights.end(),
                                 0.0);
  std::vector<double> p(K, 0.0);
  for (std::size_t j = 0; j < expertWeights.size(); ++j)
    for (std::size_t i = 0; i < K; ++i)
      p[i] += expertWeights[j] * advice[j][i];
  for (std::size_t i = 0; i < K; ++i)
    p[i] = (1.0 - gamma) * p[i] / total + gamma / static_cast<double>(K);
  return p;
}

void exp4_update(std::vector<double>& expertWeights, const AdviceMatrix& advice,
                 ArmId played, double reward, double pPlayed, double gamma) {
  if (!(reward >= 0.0 && reward <= 1.0))
    throw std::domain_error("exp4_update: reward outside [0,1]");
  if (!(pPlayed > 0.0)) throw std::domain_error("exp4_update: pPlayed <= 0");
  double K = static_cast<double>(advice.front().size());
  for (std::size_t j = 0; j < expertWeights.size(); ++j) {
    double yhat = advice[j][played] * reward / pPlayed;
    expertWeights[j] *= std::exp(gamma * yhat / K);
  }
  guardWeights(expertWeights);
}

void exp4p_update(std::vector<double>& expertWeights,
                  const AdviceMatrix& advice, ArmId played, double reward,
                  const std::vector<double>& probs, double delta, double gamma,
                  std::uint64_t horizon) {
  if (!(reward >= 0.0 && reward <= 1.0))
    throw std::domain_error("exp4p_update: reward outside [0,1]");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("exp4p_update: delta outside (0,1)");
  if (horizon == 0) throw std::domain_error("exp4p_update: horizon unknown");
  double K = static_cast<double>(probs.size());
  double N = static_cast<double>(expertWeights.size());
  double bonusScale =
      std::sqrt(std::log(N / delta) / (K * static_cast<double>(horizon)));
  for (std::size_t j = 0; j < expertWeights.size(); ++j) {
    double yhat = advice[j][played] * reward / probs[played];
    double vhat = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i)
      vhat += advice[j][i] / probs[i];
    expertWeights[j] *= std::exp(gamma / 2.0 * (yhat + vhat * bonusScale));
  }
  guardWeights(expertWeights);
}

Exp3Policy::Exp3Policy(std::size_t K, double gamma, double rewardLo,
                       double rewardHi)
    : lo_(rewardLo), hi_(rewardHi) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must lie in [0,1]");
  if (!(rewardHi > rewardLo))
    throw std::invalid_argument("reward bounds must satisfy lo < hi");
  state_.weights.assign(K, 1.0);
  state_.gamma = gamma;
}

void Exp3Policy::resetWeights() {
  std::fill(state_.weights.begin(), state_.weights.end(), 1.0);
}

PolicyDecision Exp3Policy::select(std::uint64_t, RngStream& rng) {
  lastProbs_ = exp3_probs(state_);
  std::size_t K = state_.weights.size();
  ArmId arm;
  if (rng.uniform01() < state_.gamma) {
    arm = rng.uniformIndex(K);
    lastUniform_ = true;
  } else {
    double total =
        std::accumulate(state_.weights.begin(), state_.weights.end(), 0.0);
    std::vector<double> wp(K);
    for (std::size_t i = 0; i < K; ++i) wp[i] = state_.weights[i] / total;
    arm = sample_discrete(wp, rng);
    lastUniform_ = false;
  }
  PolicyDecision d;
  d.arms = {arm};
  d.scores = lastProbs_;
  return d;
}

void Exp3Policy::observe(std::uint64_t, const PolicyDecision& d,
                         const std::vector<double>& rewards) {
  ArmId arm = d.arms.front();
  double rho = rescale01(rewards.front(), lo_, hi_);
  exp3_update(state_, arm, rho, lastProbs_.at(arm));
}

Exp4Policy::Exp4Policy(std::size_t K, std::size_t numExperts, double gamma,
                       AdviceFn advice, Variant variant, double delta,
                       std::uint64_t horizon, double rewardLo, double rewardHi)
    : K_(K),
      weights_(numExperts, 1.0),
      gamma_(gamma),
      adviceFn_(std::move(advice)),
      variant_(variant),
      delta_(delta),
      horizon_(horizon),
      lo_(rewardLo),
      hi_(rewardHi) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (numExperts == 0) throw std::invalid_argument("need at least one expert");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("gamma must lie in [0,1]");
  if (!adviceFn_) throw std::invalid_argument("advice generator required");
  if (variant_ == Variant::HighProbability) {
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("delta must lie in (0,1)");
    if (horizon == 0) throw std::invalid_argument("horizon required");
  }
  if (!(rewardHi > rewardLo))
    throw std::invalid_argument("reward bounds must satisfy lo < hi");
}

PolicyDecision Exp4Policy::select(std::uint64_t t, RngStream& rng) {
  lastAdvice_ = adviceFn_(t);
  if (lastAdvice_.size() != weights_.size())
    throw std::domain_error("advice generator changed expert count");
  validate_advice(lastAdvice_, K_);
  lastProbs_ = exp4_probs(weights_, lastAdvice_, gamma_);
  PolicyDecision d;
  d.arms = {sample_discrete(lastProbs_, rng)};
  d.scores = lastProbs_;
  return d;
}

void Exp4Policy::observe(std::uint64_t, const PolicyDecision& d,
                         const std::vector<double>& rewards) {
  ArmId arm = d.arms.front();
  double rho = rescale01(rewards.front(), lo_, hi_);
  if (variant_ == Variant::Plain)
    exp4_update(weights_, lastAdvice_, arm, rho, lastProbs_.at(arm), gamma_);
  else
    exp4p_update(weights_, lastAdvice_, arm, rho, lastProbs_, delta_, gamma_,
                 horizon_);
}

SaoPolicy::SaoPolicy(std::uint64_t horizon, double C, double exp3Gamma,
                     double rewardLo, double rewardHi)
    : C_(C), lo_(rewardLo), hi_(rewardHi), stats_(2) {
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  if (!(C > 0.0)) throw std::invalid_argument("C must be positive");
  if (!(exp3Gamma >= 0.0 && exp3Gamma <= 1.0))
    throw std::invalid_argument("gamma must lie in [0,1]");
  if (!(rewardHi > rewardLo))
    throw std::invalid_argument("reward bounds must satisfy lo < hi");
  exp3_.weights.assign(2, 1.0);
  exp3_.gamma = exp3Gamma;
}

double SaoPolicy::defaultC(std::uint64_t horizon) {
  return 12.0 * std::log(static_cast<double>(horizon));
}

PolicyDecision SaoPolicy::select(std::uint64_t t, RngStream& rng) {
  PolicyDecision d;
  switch (phase_) {
    case Phase::Exploration:
      d.arms = {rng.uniformIndex(2)};
      break;
    case Phase::Exploitation: {
      double pWorse = static_cast<double>(tauStar_) /
                      (2.0 * static_cast<double>(t));
      d.arms = {rng.uniform01() < pWorse ? ArmId{1} - better_ : better_};
      break;
    }
    case Phase::Adversarial: {
      lastProbs_ = exp3_probs(exp3_);
      d.arms = {sample_discrete(lastProbs_, rng)};
      d.scores = lastProbs_;
      break;
    }
  }
  return d;
}

void SaoPolicy::observe(std::uint64_t t, const PolicyDecision& d,
                        const std::vector<double>& rewards) {
  ArmId arm = d.arms.front();
  double rho = rescale01(rewards.front(), lo_, hi_);
  if (phase_ == Phase::Adversarial) {
    exp3_update(exp3_, arm, rho, lastProbs_.at(arm));
    return;
  }
  update_stats(stats_.at(arm), rho);
  double sqT = std::sqrt(static_cast<double>(t));
  if (phase_ == Phase::Exploration) {
    if (stats_[0].count == 0 || stats_[1].count == 0) return;
    double gap = std::abs(stats_[0].mean - stats_[1].mean);
    if (static_cast<double>(t) >= C_ * C_ && gap >= 24.0 * C_ / sqT) {
      tauStar_ = t;
      better_ = stats_[0].mean >= stats_[1].mean ? 0 : 1;
      frozen_[0] = stats_[0].mean;
      frozen_[1] = stats_[1].mean;
      phase_ = Phase::Exploitation;
    }
    return;
  }
  // Exploitation consistency checks.
  double sqTau = std::sqrt(static_cast<double>(tauStar_));
  double gap = stats_[better_].mean - stats_[1 - better_].mean;
  bool ok = gap >= 8.0 * C_ / sqTau && gap <= 40.0 * C_ / sqTau;
  for (std::size_t i = 0; i < 2 && ok; ++i) {
    double drift = std::abs(stats_[i].mean - frozen_[i]);
    ok = drift <= 6.0 * C_ / sqT && drift <= 6.0 * C_ / sqTau;
  }
  if (!ok) {
    phase_ = Phase::Adversarial;
    exp3_.weights.assign(2, 1.0);
  }
}

}  // namespace bandit
