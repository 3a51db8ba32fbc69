#pragma once

#include <functional>

#include "bandit/policy.hpp"

namespace bandit {

// Inverse-CDF draw from a finite distribution; probabilities must sum to ~1.
ArmId sample_discrete(const std::vector<double>& probs, RngStream& rng);

struct Exp3State {
  std::vector<double> weights;
  double gamma = 0.1;
};

// p_i = (1 - gamma) * w_i / sum(w) + gamma / K.
std::vector<double> exp3_probs(const Exp3State& state);

// Multiplies the played weight by exp(gamma * reward / (pPlayed * K)) and
// renormalizes all weights when the largest exceeds the overflow guard.
void exp3_update(Exp3State& state, ArmId arm, double reward, double pPlayed);

// Advice matrix: one probability row over K arms per expert.
using AdviceMatrix = std::vector<std::vector<double>>;
using AdviceFn = std::function<AdviceMatrix(std::uint64_t t)>;

void validate_advice(const AdviceMatrix& advice, std::size_t K);

AdviceMatrix make_uniform_advice(std::size_t numExperts, std::size_t K);
AdviceMatrix make_point_mass_advice(std::size_t numExperts, std::size_t K);

std::vector<double> exp4_probs(const std::vector<double>& expertWeights,
                               const AdviceMatrix& advice, double gamma);

void exp4_update(std::vector<double>& expertWeights, const AdviceMatrix& advice,
                 ArmId played, double reward, double pPlayed, double gamma);

// High-probability variant: adds the advice-coverage bonus scaled by
// sqrt(ln(N / delta) / (K * horizon)) inside the exponent.
void exp4p_update(std::vector<double>& expertWeights,
                  const AdviceMatrix& advice, ArmId played, double reward,
                  const std::vector<double>& probs, double delta, double gamma,
                  std::uint64_t horizon);

class Exp3Policy : public Policy {
 public:
  Exp3Policy(std::size_t K, double gamma, double rewardLo = 0.0,
             double rewardHi = 1.0);
  std::size_t numArms() const override { return state_.weights.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  bool lastWasUniform() const { return lastUniform_; }
  const Exp3State& state() const { return state_; }
  void resetWeights();

 private:
  Exp3State state_;
  double lo_, hi_;
  std::vector<double> lastProbs_;
  bool lastUniform_ = false;
};

class Exp4Policy : public Policy {
 public:
  enum class Variant { Plain, HighProbability };
  Exp4Policy(std::size_t K, std::size_t numExperts, double gamma,
             AdviceFn advice, Variant variant = Variant::Plain,
             double delta = 0.05, std::uint64_t horizon = 0,
             double rewardLo = 0.0, double rewardHi = 1.0);
  std::size_t numArms() const override { return K_; }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  const std::vector<double>& expertWeights() const { return weights_; }

 private:
  std::size_t K_;
  std::vector<double> weights_;
  double gamma_;
  AdviceFn adviceFn_;
  Variant variant_;
  double delta_;
  std::uint64_t horizon_;
  double lo_, hi_;
  AdviceMatrix lastAdvice_;
  std::vector<double> lastProbs_;
};

// Two-arm stochastic-first policy with an adversarial fallback. Explores
// uniformly until the empirical gap clears its threshold, exploits with a
// decaying probability of the worse arm, and drops to an embedded Exp3
// permanently if any consistency check fails.
class SaoPolicy : public Policy {
 public:
  enum class Phase { Exploration, Exploitation, Adversarial };
  SaoPolicy(std::uint64_t horizon, double C, double exp3Gamma = 0.1,
            double rewardLo = 0.0, double rewardHi = 1.0);
  static double defaultC(std::uint64_t horizon);
  std::size_t numArms() const override { return 2; }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  Phase phase() const { return phase_; }
  std::uint64_t switchStep() const { return tauStar_; }

 private:
  double C_;
  double lo_, hi_;
  std::vector<ArmStats> stats_;
  Phase phase_ = Phase::Exploration;
  std::uint64_t tauStar_ = 0;
  ArmId better_ = 0;
  double frozen_[2] = {0.0, 0.0};
  Exp3State exp3_;
  std::vector<double> lastProbs_;
};

}  // namespace bandit
