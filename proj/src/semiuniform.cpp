#include "bandit/semiuniform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bandit {

namespace {

void requireUnit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

void requireGapParam(double d) {
  if (!(d > 0.0 && d < 1.0))
    throw std::invalid_argument("d must lie in (0,1)");
}

}  // namespace

EpsilonSchedule EpsilonSchedule::constant(double eps0) {
  requireUnit(eps0, "eps0");
  EpsilonSchedule s;
  s.kind = Kind::Constant;
  s.eps0 = eps0;
  return s;
}

EpsilonSchedule EpsilonSchedule::vermorel(double eps0) {
  if (!(eps0 >= 0.0)) throw std::invalid_argument("eps0 must be >= 0");
  EpsilonSchedule s;
  s.kind = Kind::Vermorel;
  s.eps0 = eps0;
  return s;
}

EpsilonSchedule EpsilonSchedule::greedyMix(double d, std::size_t K) {
  requireGapParam(d);
  if (K == 0) throw std::invalid_argument("K must be >= 1");
  EpsilonSchedule s;
  s.kind = Kind::GreedyMix;
  s.d = d;
  s.K = K;
  return s;
}

EpsilonSchedule EpsilonSchedule::epsilonN(double c, double d, std::size_t K) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
  requireGapParam(d);
  if (K == 0) throw std::invalid_argument("K must be >= 1");
  EpsilonSchedule s;
  s.kind = Kind::EpsilonN;
  s.c = c;
  s.d = d;
  s.K = K;
  return s;
}

EpsilonSchedule EpsilonSchedule::epsilonFirst(double eps0, std::uint64_t H) {
  requireUnit(eps0, "eps0");
  if (H == 0) throw std::invalid_argument("H must be >= 1");
  EpsilonSchedule s;
  s.kind = Kind::EpsilonFirst;
  s.eps0 = eps0;
  s.H = H;
  return s;
}

double epsilon_at(const EpsilonSchedule& s, std::uint64_t t) {
  if (t < 1) throw std::domain_error("epsilon_at: t must be >= 1");
  auto td = static_cast<double>(t);
  switch (s.kind) {
    case EpsilonSchedule::Kind::Constant:
      return s.eps0;
    case EpsilonSchedule::Kind::Vermorel:
      return std::min(1.0, s.eps0 / td);
    case EpsilonSchedule::Kind::GreedyMix: {
      if (t == 1) return 1.0;  // ln(0) undefined; full exploration first
      double u = td - 1.0;
      return std::min(1.0,
                      5.0 * static_cast<double>(s.K) / (s.d * s.d) *
                          std::log(u) / u);
    }
    case EpsilonSchedule::Kind::EpsilonN:
      return std::min(1.0,
                      s.c * static_cast<double>(s.K) / (s.d * s.d * td));
    case EpsilonSchedule::Kind::EpsilonFirst:
      return epsilon_first_phase(t, s.H, s.eps0) == Phase::Explore ? 1.0 : 0.0;
  }
  return 0.0;
}

PolicyDecision select_semiuniform(const std::vector<ArmStats>& stats,
                                  double eps, RngStream& rng) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::domain_error("select_semiuniform: eps outside [0,1]");
  PolicyDecision d;
  if (rng.uniform01() < eps) {
    d.arms = {rng.uniformIndex(stats.size())};
    return d;
  }
  std::vector<double> means(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i)
    means[i] = mean_or_sentinel(stats[i]);
  d.arms = {argmax_tiebreak(means, rng)};
  return d;
}

Phase epsilon_first_phase(std::uint64_t t, std::uint64_t H, double eps0) {
  if (t < 1 || t > H) throw std::domain_error("epsilon_first_phase: bad t");
  auto budget =
      static_cast<std::uint64_t>(std::ceil(eps0 * static_cast<double>(H)));
  return t <= budget ? Phase::Explore : Phase::Exploit;
}

EpsilonGreedyPolicy::EpsilonGreedyPolicy(std::size_t K,
                                         EpsilonSchedule schedule)
    : stats_(K), schedule_(schedule) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
}

PolicyDecision EpsilonGreedyPolicy::select(std::uint64_t t, RngStream& rng) {
  return select_semiuniform(stats_, epsilon_at(schedule_, t), rng);
}

void EpsilonGreedyPolicy::observe(std::uint64_t, const PolicyDecision& d,
                                  const std::vector<double>& rewards) {
  update_stats(stats_.at(d.arms.front()), rewards.front());
}

EpsilonFirstPolicy::EpsilonFirstPolicy(std::size_t K, double eps0,
                                       std::uint64_t H)
    : stats_(K), eps0_(eps0), horizon_(H) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (!(eps0 >= 0.0 && eps0 <= 1.0))
    throw std::invalid_argument("eps0 must lie in [0,1]");
}

PolicyDecision EpsilonFirstPolicy::select(std::uint64_t t, RngStream& rng) {
  PolicyDecision d;
  if (epsilon_first_phase(t, horizon_, eps0_) == Phase::Explore) {
    d.arms = {rng.uniformIndex(stats_.size())};
    return d;
  }
  if (!frozen_) {
    std::vector<double> means(stats_.size());
    for (std::size_t i = 0; i < stats_.size(); ++i)
      means[i] = mean_or_sentinel(stats_[i]);
    frozen_ = argmax_tiebreak(means, rng);
  }
  d.arms = {*frozen_};
  return d;
}

void EpsilonFirstPolicy::observe(std::uint64_t, const PolicyDecision& d,
                                 const std::vector<double>& rewards) {
  update_stats(stats_.at(d.arms.front()), rewards.front());
}

EpochWrapPolicy::EpochWrapPolicy(
    std::function<std::unique_ptr<Policy>()> factory, std::uint64_t epochLength)
    : factory_(std::move(factory)), epochLength_(epochLength) {
  if (epochLength_ == 0) throw std::invalid_argument("epochLength must be >= 1");
  inner_ = factory_();
}

PolicyDecision EpochWrapPolicy::select(std::uint64_t, RngStream& rng) {
  if (stepsIntoEpoch_ == epochLength_) {
    inner_ = factory_();
    stepsIntoEpoch_ = 0;
  }
  return inner_->select(stepsIntoEpoch_ + 1, rng);
}

void EpochWrapPolicy::observe(std::uint64_t, const PolicyDecision& d,
                              const std::vector<double>& rewards) {
  inner_->observe(stepsIntoEpoch_ + 1, d, rewards);
  stepsIntoEpoch_ += 1;
}

}  // namespace bandit
