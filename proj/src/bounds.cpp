#include "bandit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bandit {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Gaps are only meaningful when expectations do not move over time.
bool stationaryGaps(const Environment& env) {
  return dynamic_cast<const StochasticEnv*>(&env) != nullptr;
}

std::vector<double> gapsAt(const Environment& env, std::uint64_t t) {
  double best = oracle_best(env, t).value;
  std::vector<double> gaps(env.numArms());
  for (std::size_t i = 0; i < gaps.size(); ++i)
    gaps[i] = best - env.expectedReward(i, t);
  return gaps;
}

double ucb2CAlpha(double alpha) {
  double e = std::numbers::e;
  double ratio = (1.0 + alpha) / alpha;
  return 1.0 + (1.0 + alpha) * e / (alpha * alpha) +
         std::pow(ratio, 1.0 + alpha) *
             (1.0 + 11.0 * (1.0 + alpha) /
                        (5.0 * alpha * alpha * std::log(1.0 + alpha)));
}

}  // namespace

double evaluate_bound(const BoundSpec& spec, const Environment& env,
                      std::uint64_t t) {
  if (t == 0) throw std::domain_error("bound time must be >= 1");
  double K = static_cast<double>(env.numArms());
  switch (spec.family) {
    case BoundSpec::Family::GenericLog:
      return spec.c * std::log(static_cast<double>(t));
    case BoundSpec::Family::GenericSqrt:
      return spec.c * std::sqrt(K * static_cast<double>(t) * std::log(K));
    default:
      break;
  }
  if (!stationaryGaps(env)) return kNan;
  auto gaps = gapsAt(env, t);
  switch (spec.family) {
    case BoundSpec::Family::Ucb1Gap: {
      double logSum = 0.0, gapSum = 0.0;
      for (double g : gaps) {
        gapSum += g;
        if (g > 0.0) logSum += std::log(static_cast<double>(t)) / g;
      }
      double pi = std::numbers::pi;
      return 8.0 * logSum + (1.0 + pi * pi / 3.0) * gapSum;
    }
    case BoundSpec::Family::Ucb2Gap: {
      if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
        throw std::domain_error("alpha must lie in (0,1)");
      double minValid = 0.0;
      for (double g : gaps)
        if (g > 0.0) minValid = std::max(minValid, 1.0 / (2.0 * g * g));
      if (static_cast<double>(t) < minValid) return kNan;
      double calpha = ucb2CAlpha(spec.alpha);
      double total = 0.0;
      for (double g : gaps) {
        if (g <= 0.0) continue;
        double lead = (1.0 + spec.alpha) * (1.0 + 4.0 * spec.alpha) *
                      std::log(2.0 * std::numbers::e * g * g *
                               static_cast<double>(t)) /
                      (2.0 * g);
        total += lead + calpha / g;
      }
      return total;
    }
    case BoundSpec::Family::Minimax:
      return 25.0 * std::sqrt(static_cast<double>(t) * K);
    default:
      return kNan;
  }
}

BoundCheck check_bound(const BoundSpec& spec, const Environment& env,
                       std::uint64_t t, double observedRegret) {
  BoundCheck result;
  result.spec = spec;
  result.bound = evaluate_bound(spec, env, t);
  result.observed = observedRegret;
  if (std::isnan(result.bound))
    result.verdict = BoundVerdict::NotApplicable;
  else
    result.verdict = observedRegret < result.bound ? BoundVerdict::BelowBound
                                                   : BoundVerdict::AboveBound;
  return result;
}

}  // namespace bandit
