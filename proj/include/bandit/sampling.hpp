#pragma once

#include "bandit/policy.hpp"
#include "bandit/ucb.hpp"

namespace bandit {

// Normal prior, normal likelihood with a shared observation variance that the
// owning bank supplies at query time.
struct GaussianArmPosterior {
  double priorMean = 0.0;
  double priorVar = 1.0;
  std::uint64_t n = 0;
  double sum = 0.0;
  double sumSquares = 0.0;
  void update(double reward) {
    n += 1;
    sum += reward;
    sumSquares += reward * reward;
  }
  double posteriorMean(double obsVar) const;
  double posteriorVar(double obsVar) const;
};

struct PosteriorBank {
  enum class Model { Bernoulli, Gaussian };
  Model model = Model::Bernoulli;
  std::vector<BetaPosterior> beta;
  std::vector<GaussianArmPosterior> gauss;
  double obsVar = 1.0;  // shared Gaussian observation variance

  std::size_t size() const {
    return model == Model::Bernoulli ? beta.size() : gauss.size();
  }
  double posteriorMean(std::size_t arm) const;
  double drawPosterior(std::size_t arm, RngStream& rng) const;
  // Folds the reward into the arm's posterior; Gaussian banks also refresh
  // the pooled within-arm residual variance estimate.
  void update(std::size_t arm, double reward);
};

PolicyDecision thompson_select(const PosteriorBank& bank, RngStream& rng);
// Each draw is replaced by max(draw, posterior mean) before the argmax.
PolicyDecision thompson_select_optimistic(const PosteriorBank& bank,
                                          RngStream& rng);

// (best mean - floor(sqrt(K))-th mean) / sqrt(K), means sorted descending.
double poker_delta(const std::vector<double>& sortedMeansDesc);

// mean + delta * (H - t) * P[Normal(mean, sigma/sqrt(n)) >= bestMean + delta].
// sigma is the resolved per-arm deviation estimate; a zero standard error
// degenerates to a step function (0.5 exactly at the threshold).
double poker_score(const ArmStats& stats, double sigma, double bestMean,
                   double delta, std::uint64_t H, std::uint64_t t);

// Winner of a subsampled mean duel: 0 for the first history, 1 for the
// second. Equal-length histories are compared directly without subsampling.
std::size_t besa_duel(const std::vector<double>& histA,
                      const std::vector<double>& histB, RngStream& rng);

// Random-permutation single-elimination bracket of besa_duel rounds; an
// unpaired arm advances unopposed.
ArmId besa_tournament(const std::vector<std::vector<double>>& histories,
                      RngStream& rng);

class ThompsonPolicy : public Policy {
 public:
  ThompsonPolicy(std::size_t K, PosteriorBank::Model model,
                 bool optimistic = false, double priorA = 1.0,
                 double priorB = 1.0, double priorMean = 0.0,
                 double priorVar = 1.0);
  std::size_t numArms() const override { return bank_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  const PosteriorBank& bank() const { return bank_; }

 private:
  PosteriorBank bank_;
  bool optimistic_;
};

class PokerPolicy : public Policy {
 public:
  PokerPolicy(std::size_t K, std::uint64_t H);
  std::size_t numArms() const override { return stats_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;

 private:
  double sigmaFor(std::size_t arm) const;
  std::vector<ArmStats> stats_;
  std::uint64_t horizon_;
};

class BesaPolicy : public Policy {
 public:
  explicit BesaPolicy(std::size_t K);
  std::size_t numArms() const override { return histories_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;

 private:
  std::vector<std::vector<double>> histories_;
};

}  // namespace bandit
