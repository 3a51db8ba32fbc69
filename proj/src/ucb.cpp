#include "bandit/ucb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bandit/math.hpp"

namespace bandit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared sentinel-first selection: unplayed arms score +inf.
template <typename IndexFn>
PolicyDecision selectByIndex(const std::vector<ArmStats>& stats,
                             RngStream& rng, IndexFn&& index) {
  std::vector<double> scores(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i)
    scores[i] = stats[i].count == 0 ? kInf : index(stats[i]);
  PolicyDecision d;
  d.arms = {argmax_tiebreak(scores, rng)};
  d.scores = std::move(scores);
  return d;
}

}  // namespace

double ucb1_index(double mean, std::uint64_t n_i, std::uint64_t t) {
  if (n_i == 0) throw std::domain_error("ucb1_index: n_i must be >= 1");
  return mean + std::sqrt(2.0 * std::log(static_cast<double>(t)) /
                          static_cast<double>(n_i));
}

double ucb2_index(double mean, std::uint64_t r_i, std::uint64_t n,
                  double alpha) {
  double tau = std::pow(1.0 + alpha, static_cast<double>(r_i));
  double num = (1.0 + alpha) *
               std::log(std::numbers::e * static_cast<double>(n) / tau);
  return mean + std::sqrt(num / (2.0 * tau));
}

std::uint64_t ucb2_epoch_plays(std::uint64_t r_i, double alpha) {
  double lo = std::pow(1.0 + alpha, static_cast<double>(r_i));
  double hi = lo * (1.0 + alpha);
  return static_cast<std::uint64_t>(std::ceil(hi - lo));
}

double ucb_tuned_index(const ArmStats& stats, std::uint64_t t) {
  if (stats.count == 0)
    throw std::domain_error("ucb_tuned_index: arm unplayed");
  auto n = static_cast<double>(stats.count);
  double lnT = std::log(static_cast<double>(t));
  double variance =
      stats.sumSquares / n - stats.mean * stats.mean + std::sqrt(2.0 * lnT / n);
  return stats.mean + std::sqrt(lnT / n * std::min(0.25, variance));
}

double moss_index(double mean, std::uint64_t n_i, std::uint64_t H,
                  std::size_t K) {
  if (n_i == 0) throw std::domain_error("moss_index: n_i must be >= 1");
  auto n = static_cast<double>(n_i);
  double arg = static_cast<double>(H) / (static_cast<double>(K) * n);
  double lnArg = std::max(0.0, std::log(arg));
  return mean + std::sqrt(lnArg / n);
}

double kl_div_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
    throw std::domain_error("kl_div_bernoulli: arguments outside [0,1]");
  auto term = [](double a, double b) {
    if (a == 0.0) return 0.0;       // 0*log(0) and 0*log(0/0)
    if (b == 0.0) return kInf;      // a*log(a/0), a > 0
    return a * std::log(a / b);
  };
  return term(p, q) + term(1.0 - p, 1.0 - q);
}

double kl_ucb_upper(double mean, std::uint64_t n_i, std::uint64_t t,
                    double c) {
  if (n_i == 0 || t == 0) throw std::domain_error("kl_ucb_upper: bad inputs");
  double lnT = std::log(static_cast<double>(t));
  double rhs = lnT;
  if (static_cast<double>(t) >= std::exp(1.0))
    rhs += c * std::log(lnT);
  rhs /= static_cast<double>(n_i);
  if (rhs <= 0.0) return mean;
  if (mean >= 1.0) return 1.0;
  // d(mean, .) is increasing on [mean, 1); bisect for the boundary.
  double lo = mean, hi = 1.0;
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (kl_div_bernoulli(mean, mid) <= rhs)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double bayes_ucb_index(const BetaPosterior& posterior, std::uint64_t t) {
  if (t == 0) throw std::domain_error("bayes_ucb_index: t must be >= 1");
  double level = 1.0 - 1.0 / static_cast<double>(t);
  return beta_quantile(level, posterior.a, posterior.b);
}

Ucb1Policy::Ucb1Policy(std::size_t K) : stats_(K) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
}

PolicyDecision Ucb1Policy::select(std::uint64_t t, RngStream& rng) {
  return selectByIndex(stats_, rng, [t](const ArmStats& s) {
    return ucb1_index(s.mean, s.count, t);
  });
}

void Ucb1Policy::observe(std::uint64_t, const PolicyDecision& d,
                         const std::vector<double>& rewards) {
  update_stats(stats_.at(d.arms.front()), rewards.front());
}

Ucb2Policy::Ucb2Policy(std::size_t K, double alpha)
    : stats_(K), epochs_(K, 0), alpha_(alpha) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0,1)");
}

PolicyDecision Ucb2Policy::select(std::uint64_t, RngStream& rng) {
  PolicyDecision d;
  if (remaining_ > 0) {
    d.arms = {current_};
    return d;
  }
  std::vector<double> scores(stats_.size());
  bool startEpoch = true;
  for (std::size_t i = 0; i < stats_.size(); ++i) {
    if (stats_[i].count == 0) {
      scores[i] = kInf;
      startEpoch = false;  // still in the play-each-arm-once phase
    } else {
      scores[i] = ucb2_index(stats_[i].mean, epochs_[i], totalPlays_, alpha_);
    }
  }
  current_ = argmax_tiebreak(scores, rng);
  if (startEpoch) remaining_ = ucb2_epoch_plays(epochs_[current_], alpha_);
  d.arms = {current_};
  d.scores = std::move(scores);
  return d;
}

void Ucb2Policy::observe(std::uint64_t, const PolicyDecision& d,
                         const std::vector<double>& rewards) {
  ArmId arm = d.arms.front();
  update_stats(stats_.at(arm), rewards.front());
  totalPlays_ += 1;
  if (remaining_ > 0) {
    remaining_ -= 1;
    if (remaining_ == 0) epochs_[arm] += 1;  // the arm's epoch ends
  }
}

UcbTunedPolicy::UcbTunedPolicy(std::size_t K) : stats_(K) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
}

PolicyDecision UcbTunedPolicy::select(std::uint64_t t, RngStream& rng) {
  return selectByIndex(stats_, rng, [t](const ArmStats& s) {
    return ucb_tuned_index(s, t);
  });
}

void UcbTunedPolicy::observe(std::uint64_t, const PolicyDecision& d,
                             const std::vector<double>& rewards) {
  update_stats(stats_.at(d.arms.front()), rewards.front());
}

MossPolicy::MossPolicy(std::size_t K, std::uint64_t H)
    : stats_(K), horizon_(H) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (H < K) throw std::invalid_argument("horizon must be >= arm count");
}

PolicyDecision MossPolicy::select(std::uint64_t, RngStream& rng) {
  std::size_t K = stats_.size();
  return selectByIndex(stats_, rng, [this, K](const ArmStats& s) {
    return moss_index(s.mean, s.count, horizon_, K);
  });
}

void MossPolicy::observe(std::uint64_t, const PolicyDecision& d,
                         const std::vector<double>& rewards) {
  update_stats(stats_.at(d.arms.front()), rewards.front());
}

KlUcbPolicy::KlUcbPolicy(std::size_t K, double c) : stats_(K), c_(c) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (!(c >= 0.0)) throw std::invalid_argument("c must be >= 0");
}

PolicyDecision KlUcbPolicy::select(std::uint64_t t, RngStream& rng) {
  return selectByIndex(stats_, rng, [this, t](const ArmStats& s) {
    return kl_ucb_upper(s.mean, s.count, t, c_);
  });
}

void KlUcbPolicy::observe(std::uint64_t, const PolicyDecision& d,
                          const std::vector<double>& rewards) {
  update_stats(stats_.at(d.arms.front()), rewards.front());
}

BayesUcbPolicy::BayesUcbPolicy(std::size_t K, Model model, double priorA,
                               double priorB, double priorMean,
                               double priorVar, double obsVar)
    : model_(model),
      counts_(K, 0),
      sums_(K, 0.0),
      priorMean_(priorMean),
      priorVar_(priorVar),
      obsVar_(obsVar),
      K_(K) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (model_ == Model::Bernoulli) {
    if (!(priorA > 0.0 && priorB > 0.0))
      throw std::invalid_argument("Beta prior parameters must be positive");
    beta_.assign(K, BetaPosterior{priorA, priorB});
  } else {
    if (!(priorVar > 0.0 && obsVar > 0.0))
      throw std::invalid_argument("variances must be positive");
  }
}

std::size_t BayesUcbPolicy::numArms() const { return K_; }

PolicyDecision BayesUcbPolicy::select(std::uint64_t t, RngStream& rng) {
  std::vector<double> scores(K_);
  for (std::size_t i = 0; i < K_; ++i) {
    if (model_ == Model::Bernoulli) {
      scores[i] = counts_[i] == 0 ? kInf : bayes_ucb_index(beta_[i], t);
    } else {
      if (counts_[i] == 0) {
        scores[i] = kInf;
        continue;
      }
      auto n = static_cast<double>(counts_[i]);
      double precision = 1.0 / priorVar_ + n / obsVar_;
      double postMean =
          (priorMean_ / priorVar_ + sums_[i] / obsVar_) / precision;
      double level = 1.0 - 1.0 / static_cast<double>(t);
      scores[i] =
          postMean + std::sqrt(1.0 / precision) * normal_quantile(level);
    }
  }
  PolicyDecision d;
  d.arms = {argmax_tiebreak(scores, rng)};
  d.scores = std::move(scores);
  return d;
}

void BayesUcbPolicy::observe(std::uint64_t, const PolicyDecision& d,
                             const std::vector<double>& rewards) {
  ArmId arm = d.arms.front();
  double r = rewards.front();
  counts_.at(arm) += 1;
  sums_.at(arm) += r;
  if (model_ == Model::Bernoulli) beta_.at(arm).update(r);
}

}  // namespace bandit
