#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bandit/rng.hpp"
#include "bandit/types.hpp"

namespace bandit {

struct StochasticArmSpec {
  enum class Kind { Bernoulli, Gaussian };
  Kind kind = Kind::Bernoulli;
  double p = 0.0;      // Bernoulli success probability
  double mu = 0.0;     // Gaussian mean
  double sigma = 0.0;  // Gaussian standard deviation
  bool hasBounds = false;  // optional truncation (clamping) of samples
  double loBound = 0.0;
  double hiBound = 1.0;

  static StochasticArmSpec bernoulli(double p);
  static StochasticArmSpec gaussian(double mu, double sigma);
  StochasticArmSpec withBounds(double lo, double hi) const;

  double expectedValue() const;  // truncation handled exactly
  double sample(RngStream& rng) const;
};

// Discrete-armed reward process. One instance per replication; immutable
// after construction apart from rng passed into sampling.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::size_t numArms() const = 0;
  virtual double sampleReward(ArmId arm, std::uint64_t t, RngStream& rng) = 0;
  virtual double expectedReward(ArmId arm, std::uint64_t t) const = 0;
  virtual bool deterministic() const { return false; }
  // True when every reward is guaranteed inside [lo, hi]; exponential-weights
  // policies require this to rescale payoffs.
  virtual bool rewardBounds(double& lo, double& hi) const = 0;
};

struct OracleBest {
  ArmId arm = 0;
  double value = 0.0;
};

OracleBest oracle_best(const Environment& env, std::uint64_t t);
// Sum of the m largest expected rewards at step t.
double oracle_top_m(const Environment& env, std::uint64_t t, std::size_t m);
double gap(const Environment& env, ArmId arm, std::uint64_t t);

class StochasticEnv : public Environment {
 public:
  explicit StochasticEnv(std::vector<StochasticArmSpec> arms);
  std::size_t numArms() const override { return arms_.size(); }
  double sampleReward(ArmId arm, std::uint64_t t, RngStream& rng) override;
  double expectedReward(ArmId arm, std::uint64_t t) const override;
  bool rewardBounds(double& lo, double& hi) const override;

 private:
  std::vector<StochasticArmSpec> arms_;
};

// Piecewise-stationary (breakpoints) or per-step drift.
class NonstationaryEnv : public Environment {
 public:
  struct Segment {
    std::uint64_t start = 1;  // first step the segment applies to
    std::vector<StochasticArmSpec> arms;
  };

  explicit NonstationaryEnv(std::vector<Segment> segments);
  // Drift: Bernoulli p (clamped to [0,1]) or Gaussian mu moves by
  // slope * t from the base spec.
  NonstationaryEnv(std::vector<StochasticArmSpec> base,
                   std::vector<double> slopes);

  std::size_t numArms() const override;
  double sampleReward(ArmId arm, std::uint64_t t, RngStream& rng) override;
  double expectedReward(ArmId arm, std::uint64_t t) const override;
  bool rewardBounds(double& lo, double& hi) const override;

  StochasticArmSpec armAt(ArmId arm, std::uint64_t t) const;

 private:
  std::vector<Segment> segments_;   // empty in drift mode
  std::vector<StochasticArmSpec> base_;
  std::vector<double> slopes_;
  bool driftMode_ = false;
};

// Fixed reward table, rows = steps, columns = arms; the oblivious adversary.
class AdversarialEnv : public Environment {
 public:
  explicit AdversarialEnv(std::vector<std::vector<double>> rewards);
  std::size_t numArms() const override;
  std::uint64_t horizon() const { return rewards_.size(); }
  double sampleReward(ArmId arm, std::uint64_t t, RngStream& rng) override;
  double expectedReward(ArmId arm, std::uint64_t t) const override;
  bool deterministic() const override { return true; }
  bool rewardBounds(double& lo, double& hi) const override;

 private:
  std::vector<std::vector<double>> rewards_;
};

// Linear-payoff contextual process: reward(arm, ctx) = theta_arm . ctx + noise.
// Contexts are drawn uniformly on the unit sphere.
class ContextualLinearEnv {
 public:
  ContextualLinearEnv(std::vector<std::vector<double>> thetas,
                      double noiseSigma);
  std::size_t numArms() const { return thetas_.size(); }
  std::size_t contextDim() const { return thetas_.front().size(); }
  std::vector<double> sampleContext(RngStream& rng) const;
  double expectedReward(ArmId arm, const std::vector<double>& ctx) const;
  double sampleReward(ArmId arm, const std::vector<double>& ctx,
                      RngStream& rng) const;

 private:
  std::vector<std::vector<double>> thetas_;
  double noiseSigma_;
};

// Continuum of arms over [0,1] with a named mean function.
class ContinuumEnv {
 public:
  enum class MeanFn { Triangle, Parabola };
  enum class Noise { Bernoulli, Gaussian };

  // Triangle: f(x) = top - |x - peak|. Parabola: f(x) = top - curv*(x-peak)^2.
  ContinuumEnv(MeanFn fn, double peak, double top, Noise noise,
               double noiseSigma = 0.0, double curvature = 1.0);

  double meanAt(double x) const;
  double sampleAt(double x, RngStream& rng) const;
  double oraclePoint() const { return peak_; }
  double oracleValue() const { return top_; }

 private:
  MeanFn fn_;
  double peak_, top_, curvature_;
  Noise noise_;
  double noiseSigma_;
};

}  // namespace bandit
