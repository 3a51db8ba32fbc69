#include "bandit/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bandit/math.hpp"

namespace bandit {

StochasticArmSpec StochasticArmSpec::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("Bernoulli p must lie in [0,1]");
  StochasticArmSpec s;
  s.kind = Kind::Bernoulli;
  s.p = p;
  return s;
}

StochasticArmSpec StochasticArmSpec::gaussian(double mu, double sigma) {
  if (!(sigma >= 0.0))
    throw std::invalid_argument("Gaussian sigma must be >= 0");
  StochasticArmSpec s;
  s.kind = Kind::Gaussian;
  s.mu = mu;
  s.sigma = sigma;
  return s;
}

StochasticArmSpec StochasticArmSpec::withBounds(double lo, double hi) const {
  if (!(lo < hi)) throw std::invalid_argument("bounds must satisfy lo < hi");
  StochasticArmSpec s = *this;
  s.hasBounds = true;
  s.loBound = lo;
  s.hiBound = hi;
  return s;
}

double StochasticArmSpec::expectedValue() const {
  if (kind == Kind::Bernoulli) return p;
  if (!hasBounds) return mu;
  return clamped_gaussian_mean(mu, sigma, loBound, hiBound);
}

double StochasticArmSpec::sample(RngStream& rng) const {
  double x;
  if (kind == Kind::Bernoulli) {
    x = rng.bernoulli(p) ? 1.0 : 0.0;
  } else {
    x = rng.gaussian(mu, sigma);
  }
  if (hasBounds) x = std::clamp(x, loBound, hiBound);
  return x;
}

OracleBest oracle_best(const Environment& env, std::uint64_t t) {
  OracleBest best{0, env.expectedReward(0, t)};
  for (ArmId i = 1; i < env.numArms(); ++i) {
    double v = env.expectedReward(i, t);
    if (v > best.value) best = {i, v};
  }
  return best;
}

double oracle_top_m(const Environment& env, std::uint64_t t, std::size_t m) {
  if (m > env.numArms())
    throw std::domain_error("oracle_top_m: m exceeds arm count");
  std::vector<double> vals(env.numArms());
  for (ArmId i = 0; i < vals.size(); ++i) vals[i] = env.expectedReward(i, t);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += vals[i];
  return sum;
}

double gap(const Environment& env, ArmId arm, std::uint64_t t) {
  return oracle_best(env, t).value - env.expectedReward(arm, t);
}

StochasticEnv::StochasticEnv(std::vector<StochasticArmSpec> arms)
    : arms_(std::move(arms)) {
  if (arms_.empty()) throw std::invalid_argument("need at least one arm");
}

double StochasticEnv::sampleReward(ArmId arm, std::uint64_t, RngStream& rng) {
  return arms_.at(arm).sample(rng);
}

double StochasticEnv::expectedReward(ArmId arm, std::uint64_t) const {
  return arms_.at(arm).expectedValue();
}

static bool specBounds(const std::vector<StochasticArmSpec>& arms, double& lo,
                       double& hi) {
  lo = 1e300;
  hi = -1e300;
  for (const auto& a : arms) {
    double l, h;
    if (a.kind == StochasticArmSpec::Kind::Bernoulli) {
      l = 0.0;
      h = 1.0;
    } else if (a.hasBounds) {
      l = a.loBound;
      h = a.hiBound;
    } else if (a.sigma == 0.0) {
      l = h = a.mu;
    } else {
      return false;  // unbounded Gaussian
    }
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  }
  if (lo == hi) hi = lo + 1.0;  // degenerate range, keep rescaling valid
  return true;
}

bool StochasticEnv::rewardBounds(double& lo, double& hi) const {
  return specBounds(arms_, lo, hi);
}

NonstationaryEnv::NonstationaryEnv(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw std::invalid_argument("need >= 1 segment");
  if (segments_.front().start != 1)
    throw std::invalid_argument("first segment must start at step 1");
  std::size_t k = segments_.front().arms.size();
  if (k == 0) throw std::invalid_argument("need at least one arm");
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    if (segments_[i].start <= segments_[i - 1].start)
      throw std::invalid_argument("segment starts must strictly increase");
    if (segments_[i].arms.size() != k)
      throw std::invalid_argument("segments must keep the arm count");
  }
}

NonstationaryEnv::NonstationaryEnv(std::vector<StochasticArmSpec> base,
                                   std::vector<double> slopes)
    : base_(std::move(base)), slopes_(std::move(slopes)), driftMode_(true) {
  if (base_.empty()) throw std::invalid_argument("need at least one arm");
  if (base_.size() != slopes_.size())
    throw std::invalid_argument("one slope per arm required");
}

std::size_t NonstationaryEnv::numArms() const {
  return driftMode_ ? base_.size() : segments_.front().arms.size();
}

StochasticArmSpec NonstationaryEnv::armAt(ArmId arm, std::uint64_t t) const {
  if (driftMode_) {
    StochasticArmSpec s = base_.at(arm);
    double shift = slopes_.at(arm) * static_cast<double>(t);
    if (s.kind == StochasticArmSpec::Kind::Bernoulli)
      s.p = std::clamp(s.p + shift, 0.0, 1.0);
    else
      s.mu += shift;
    return s;
  }
  const Segment* seg = &segments_.front();
  for (const auto& candidate : segments_) {
    if (candidate.start <= t) seg = &candidate;
  }
  return seg->arms.at(arm);
}

double NonstationaryEnv::sampleReward(ArmId arm, std::uint64_t t,
                                      RngStream& rng) {
  return armAt(arm, t).sample(rng);
}

double NonstationaryEnv::expectedReward(ArmId arm, std::uint64_t t) const {
  return armAt(arm, t).expectedValue();
}

bool NonstationaryEnv::rewardBounds(double& lo, double& hi) const {
  if (driftMode_) {
    // Drifting Gaussian means are unbounded in general; Bernoulli stays [0,1].
    for (const auto& a : base_)
      if (a.kind == StochasticArmSpec::Kind::Gaussian && !a.hasBounds)
        return false;
    lo = 1e300;
    hi = -1e300;
    for (const auto& a : base_) {
      double l = a.kind == StochasticArmSpec::Kind::Bernoulli ? 0.0 : a.loBound;
      double h = a.kind == StochasticArmSpec::Kind::Bernoulli ? 1.0 : a.hiBound;
      lo = std::min(lo, l);
      hi = std::max(hi, h);
    }
    return true;
  }
  lo = 1e300;
  hi = -1e300;
  for (const auto& seg : segments_) {
    double l, h;
    if (!specBounds(seg.arms, l, h)) return false;
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  }
  return true;
}

AdversarialEnv::AdversarialEnv(std::vector<std::vector<double>> rewards)
    : rewards_(std::move(rewards)) {
  if (rewards_.empty()) throw std::invalid_argument("empty reward matrix");
  std::size_t k = rewards_.front().size();
  if (k == 0) throw std::invalid_argument("need at least one arm");
  for (const auto& row : rewards_) {
    if (row.size() != k)
      throw std::invalid_argument("ragged reward matrix");
    for (double v : row)
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("matrix entries must lie in [0,1]");
  }
}

std::size_t AdversarialEnv::numArms() const { return rewards_.front().size(); }

double AdversarialEnv::sampleReward(ArmId arm, std::uint64_t t, RngStream&) {
  return expectedReward(arm, t);
}

double AdversarialEnv::expectedReward(ArmId arm, std::uint64_t t) const {
  if (t < 1 || t > rewards_.size())
    throw std::domain_error("step beyond the adversarial matrix horizon");
  return rewards_[t - 1].at(arm);
}

bool AdversarialEnv::rewardBounds(double& lo, double& hi) const {
  lo = 0.0;
  hi = 1.0;
  return true;
}

ContextualLinearEnv::ContextualLinearEnv(
    std::vector<std::vector<double>> thetas, double noiseSigma)
    : thetas_(std::move(thetas)), noiseSigma_(noiseSigma) {
  if (thetas_.empty()) throw std::invalid_argument("need at least one arm");
  std::size_t d = thetas_.front().size();
  if (d == 0) throw std::invalid_argument("context dimension must be >= 1");
  for (const auto& th : thetas_)
    if (th.size() != d)
      throw std::invalid_argument("all arms need the same coefficient length");
  if (!(noiseSigma_ >= 0.0))
    throw std::invalid_argument("noiseSigma must be >= 0");
}

std::vector<double> ContextualLinearEnv::sampleContext(RngStream& rng) const {
  std::vector<double> ctx(contextDim());
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& c : ctx) {
      c = rng.gaussian();
      norm += c * c;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& c : ctx) c /= norm;
  return ctx;
}

double ContextualLinearEnv::expectedReward(
    ArmId arm, const std::vector<double>& ctx) const {
  const auto& th = thetas_.at(arm);
  double v = 0.0;
  for (std::size_t i = 0; i < th.size(); ++i) v += th[i] * ctx[i];
  return v;
}

double ContextualLinearEnv::sampleReward(ArmId arm,
                                         const std::vector<double>& ctx,
                                         RngStream& rng) const {
  return expectedReward(arm, ctx) + noiseSigma_ * rng.gaussian();
}

ContinuumEnv::ContinuumEnv(MeanFn fn, double peak, double top, Noise noise,
                           double noiseSigma, double curvature)
    : fn_(fn),
      peak_(peak),
      top_(top),
      curvature_(curvature),
      noise_(noise),
      noiseSigma_(noiseSigma) {
  if (!(peak >= 0.0 && peak <= 1.0))
    throw std::invalid_argument("peak must lie in [0,1]");
  double worstX = peak >= 0.5 ? 0.0 : 1.0;
  double low = meanAt(worstX);
  if (!(top <= 1.0 && low >= 0.0))
    throw std::invalid_argument("mean function must map [0,1] into [0,1]");
}

double ContinuumEnv::meanAt(double x) const {
  double d = x - peak_;
  if (fn_ == MeanFn::Triangle) return top_ - std::fabs(d);
  return top_ - curvature_ * d * d;
}

double ContinuumEnv::sampleAt(double x, RngStream& rng) const {
  double f = meanAt(x);
  if (noise_ == Noise::Bernoulli) return rng.bernoulli(f) ? 1.0 : 0.0;
  return f + noiseSigma_ * rng.gaussian();
}

}  // namespace bandit
