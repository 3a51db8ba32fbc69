#include "bandit/nonstationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bandit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DiscountedStats::DiscountedStats(std::size_t K, double g)
    : gamma(g), num(K, 0.0), cnt(K, 0.0) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (!(g > 0.0 && g <= 1.0))
    throw std::invalid_argument("discount must lie in (0,1]");
}

void DiscountedStats::record(ArmId arm, double reward) {
  for (std::size_t i = 0; i < num.size(); ++i) {
    num[i] *= gamma;
    cnt[i] *= gamma;
  }
  num.at(arm) += reward;
  cnt.at(arm) += 1.0;
}

double DiscountedStats::totalCount() const {
  return std::accumulate(cnt.begin(), cnt.end(), 0.0);
}

double ducb_mean(const DiscountedStats& stats, ArmId arm) {
  if (stats.cnt.at(arm) == 0.0) return kInf;
  return stats.num[arm] / stats.cnt[arm];
}

double ducb_pad(const DiscountedStats& stats, ArmId arm, double B, double xi) {
  if (stats.cnt.at(arm) == 0.0) return kInf;
  double total = stats.totalCount();
  return 2.0 * B * std::sqrt(xi * std::log(total) / stats.cnt[arm]);
}

WindowBuffer::WindowBuffer(std::size_t windowLen) : tau(windowLen) {
  if (windowLen == 0) throw std::invalid_argument("window must be >= 1");
}

void WindowBuffer::push(ArmId arm, double reward) {
  if (ring_.size() < tau) {
    ring_.emplace_back(arm, reward);
    return;
  }
  ring_[head_] = {arm, reward};
  head_ = (head_ + 1) % tau;
}

std::uint64_t WindowBuffer::count(ArmId arm) const {
  std::uint64_t n = 0;
  for (const auto& e : ring_)
    if (e.first == arm) n += 1;
  return n;
}

double WindowBuffer::sum(ArmId arm) const {
  double s = 0.0;
  for (const auto& e : ring_)
    if (e.first == arm) s += e.second;
  return s;
}

double swucb_mean(const WindowBuffer& buffer, ArmId arm) {
  std::uint64_t n = buffer.count(arm);
  if (n == 0) return kInf;
  return buffer.sum(arm) / static_cast<double>(n);
}

double swucb_pad(const WindowBuffer& buffer, ArmId arm, double B, double xi,
                 std::uint64_t t) {
  std::uint64_t n = buffer.count(arm);
  if (n == 0) return kInf;
  double window = static_cast<double>(
      std::min<std::uint64_t>(t, static_cast<std::uint64_t>(buffer.tau)));
  return B * std::sqrt(xi * std::log(window) / static_cast<double>(n));
}

bool ph_update(PhState& state, double x) {
  if (!(state.delta >= 0.0)) throw std::domain_error("delta must be >= 0");
  if (!(state.lambda > 0.0)) throw std::domain_error("lambda must be > 0");
  state.n += 1;
  state.mean += (x - state.mean) / static_cast<double>(state.n);
  state.mUp += x - state.mean - state.delta;
  state.minUp = std::min(state.minUp, state.mUp);
  state.mDown += x - state.mean + state.delta;
  state.maxDown = std::max(state.maxDown, state.mDown);
  return state.mUp - state.minUp > state.lambda ||
         state.maxDown - state.mDown > state.lambda;
}

void kalman_update(KalmanArm& arm, double x, double obsVar, double trVar) {
  if (!(obsVar > 0.0)) throw std::domain_error("observation variance <= 0");
  if (!(trVar >= 0.0)) throw std::domain_error("transition variance < 0");
  double prior = arm.var + trVar;
  double denom = prior + obsVar;
  arm.mu = (prior * x + obsVar * arm.mu) / denom;
  arm.var = prior * obsVar / denom;
}

void kalman_idle(KalmanArm& arm, double trVar) {
  if (!(trVar >= 0.0)) throw std::domain_error("transition variance < 0");
  arm.var += trVar;
}

DiscountedUcbPolicy::DiscountedUcbPolicy(std::size_t K, double gamma, double B,
                                         double xi)
    : stats_(K, gamma), B_(B), xi_(xi) {
  if (!(B > 0.0)) throw std::invalid_argument("B must be positive");
  if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
}

PolicyDecision DiscountedUcbPolicy::select(std::uint64_t, RngStream& rng) {
  std::vector<double> scores(stats_.num.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    scores[i] = stats_.cnt[i] == 0.0
                    ? kInf
                    : ducb_mean(stats_, i) + ducb_pad(stats_, i, B_, xi_);
  PolicyDecision d;
  d.arms = {argmax_tiebreak(scores, rng)};
  d.scores = std::move(scores);
  return d;
}

void DiscountedUcbPolicy::observe(std::uint64_t, const PolicyDecision& d,
                                  const std::vector<double>& rewards) {
  stats_.record(d.arms.front(), rewards.front());
}

SlidingWindowUcbPolicy::SlidingWindowUcbPolicy(std::size_t K, std::size_t tau,
                                               double B, double xi)
    : K_(K), buffer_(tau), B_(B), xi_(xi) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (!(B > 0.0)) throw std::invalid_argument("B must be positive");
  if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
}

PolicyDecision SlidingWindowUcbPolicy::select(std::uint64_t t,
                                              RngStream& rng) {
  std::vector<double> scores(K_);
  for (std::size_t i = 0; i < K_; ++i) {
    if (buffer_.count(i) == 0) {
      scores[i] = kInf;
    } else {
      scores[i] =
          swucb_mean(buffer_, i) + swucb_pad(buffer_, i, B_, xi_, t);
    }
  }
  PolicyDecision d;
  d.arms = {argmax_tiebreak(scores, rng)};
  d.scores = std::move(scores);
  return d;
}

void SlidingWindowUcbPolicy::observe(std::uint64_t, const PolicyDecision& d,
                                     const std::vector<double>& rewards) {
  buffer_.push(d.arms.front(), rewards.front());
}

AdaptEvePolicy::AdaptEvePolicy(std::size_t K, double phDelta, double phLambda,
                               std::uint64_t metaPeriod,
                               InnerFactory innerFactory)
    : K_(K),
      metaPeriod_(metaPeriod),
      factory_(std::move(innerFactory)),
      phDelta_(phDelta),
      phLambda_(phLambda) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (metaPeriod == 0) throw std::invalid_argument("meta period must be >= 1");
  if (!(phDelta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  if (!(phLambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (!factory_)
    factory_ = [](std::size_t k) -> std::unique_ptr<Policy> {
      return std::make_unique<UcbTunedPolicy>(k);
    };
  inner_ = factory_(K_);
  resetDetector();
}

void AdaptEvePolicy::resetDetector() {
  ph_ = PhState{};
  ph_.delta = phDelta_;
  ph_.lambda = phLambda_;
}

PolicyDecision AdaptEvePolicy::select(std::uint64_t t, RngStream& rng) {
  if (!inMeta_) return inner_->select(t, rng);
  lastMetaDecision_ = meta_->select(metaSteps_ + 1, rng);
  lastCandidate_ = lastMetaDecision_.arms.front();
  Policy* actor = lastCandidate_ == 0 ? inner_.get() : challenger_.get();
  return actor->select(t, rng);
}

void AdaptEvePolicy::observe(std::uint64_t t, const PolicyDecision& d,
                             const std::vector<double>& rewards) {
  if (!inMeta_) {
    inner_->observe(t, d, rewards);
    if (ph_update(ph_, rewards.front())) {
      alarms_ += 1;
      inMeta_ = true;
      challenger_ = factory_(K_);
      meta_ = std::make_unique<UcbTunedPolicy>(2);
      metaSteps_ = 0;
    }
    return;
  }
  Policy* actor = lastCandidate_ == 0 ? inner_.get() : challenger_.get();
  actor->observe(t, d, rewards);
  meta_->observe(metaSteps_ + 1, lastMetaDecision_, rewards);
  metaSteps_ += 1;
  if (metaSteps_ < metaPeriod_) return;
  const auto& ms = meta_->stats();
  bool challengerWins = ms[0].count > 0 && ms[1].count > 0 &&
                        ms[1].mean > ms[0].mean;
  if (challengerWins) inner_ = std::move(challenger_);
  challenger_.reset();
  meta_.reset();
  inMeta_ = false;
  resetDetector();
}

Exp3RPolicy::Exp3RPolicy(std::size_t K, double gamma, std::uint64_t intervalObs,
                         double epsilonDrift, double rewardLo, double rewardHi)
    : exp3_(K, gamma, rewardLo, rewardHi),
      intervalObs_(intervalObs),
      epsilonDrift_(epsilonDrift),
      lo_(rewardLo),
      hi_(rewardHi),
      intervalSum_(K, 0.0),
      intervalCnt_(K, 0) {
  if (intervalObs == 0)
    throw std::invalid_argument("interval length must be >= 1");
  if (!(epsilonDrift > 0.0))
    throw std::invalid_argument("drift margin must be positive");
}

PolicyDecision Exp3RPolicy::select(std::uint64_t t, RngStream& rng) {
  return exp3_.select(t, rng);
}

void Exp3RPolicy::observe(std::uint64_t t, const PolicyDecision& d,
                          const std::vector<double>& rewards) {
  bool wasUniform = exp3_.lastWasUniform();
  exp3_.observe(t, d, rewards);
  if (!wasUniform) return;
  ArmId arm = d.arms.front();
  intervalSum_.at(arm) += (rewards.front() - lo_) / (hi_ - lo_);
  intervalCnt_.at(arm) += 1;
  obsInInterval_ += 1;
  if (obsInInterval_ < intervalObs_) return;
  const auto& w = exp3_.state().weights;
  std::size_t best =
      std::max_element(w.begin(), w.end()) - w.begin();
  if (intervalCnt_[best] > 0) {
    double bestMean = intervalSum_[best] /
                      static_cast<double>(intervalCnt_[best]);
    for (std::size_t i = 0; i < intervalCnt_.size(); ++i) {
      if (intervalCnt_[i] == 0) continue;
      double mean = intervalSum_[i] / static_cast<double>(intervalCnt_[i]);
      if (mean - bestMean >= epsilonDrift_) {
        exp3_.resetWeights();
        resets_ += 1;
        break;
      }
    }
  }
  std::fill(intervalSum_.begin(), intervalSum_.end(), 0.0);
  std::fill(intervalCnt_.begin(), intervalCnt_.end(), 0);
  obsInInterval_ = 0;
}

KalmanPolicy::KalmanPolicy(std::size_t K, double obsVar, double trVar,
                           double rewardLo, double rewardHi, Mode mode)
    : obsVar_(obsVar), trVar_(trVar), mode_(mode) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (!(obsVar > 0.0))
    throw std::invalid_argument("observation variance must be positive");
  if (!(trVar >= 0.0))
    throw std::invalid_argument("transition variance must be >= 0");
  if (!(rewardHi > rewardLo))
    throw std::invalid_argument("reward bounds must satisfy lo < hi");
  KalmanArm init;
  init.mu = 0.5 * (rewardLo + rewardHi);
  double half = 0.5 * (rewardHi - rewardLo);
  init.var = half * half;
  arms_.assign(K, init);
}

PolicyDecision KalmanPolicy::select(std::uint64_t, RngStream& rng) {
  std::vector<double> scores(arms_.size());
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (mode_ == Mode::ThompsonDraw)
      scores[i] = arms_[i].mu + std::sqrt(arms_[i].var) * rng.gaussian();
    else
      scores[i] = arms_[i].mu + 2.0 * std::sqrt(arms_[i].var);
  }
  PolicyDecision d;
  d.arms = {argmax_tiebreak(scores, rng)};
  d.scores = std::move(scores);
  return d;
}

void KalmanPolicy::observe(std::uint64_t, const PolicyDecision& d,
                           const std::vector<double>& rewards) {
  ArmId played = d.arms.front();
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (i == played)
      kalman_update(arms_[i], rewards.front(), obsVar_, trVar_);
    else
      kalman_idle(arms_[i], trVar_);
  }
}

}  // namespace bandit
