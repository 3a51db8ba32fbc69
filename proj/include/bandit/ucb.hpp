#pragma once

#include "bandit/policy.hpp"

namespace bandit {

// Index functions, exposed for direct testing.
double ucb1_index(double mean, std::uint64_t n_i, std::uint64_t t);
double ucb2_index(double mean, std::uint64_t r_i, std::uint64_t n,
                  double alpha);
std::uint64_t ucb2_epoch_plays(std::uint64_t r_i, double alpha);
double ucb_tuned_index(const ArmStats& stats, std::uint64_t t);
double moss_index(double mean, std::uint64_t n_i, std::uint64_t H,
                  std::size_t K);

// Bernoulli KL divergence with the 0*log conventions; +inf when p > 0, q
// degenerate against p.
double kl_div_bernoulli(double p, double q);

// Largest q in [mean, 1] with n*d(mean,q) <= ln t + c*ln ln t; the ln ln
// term is dropped for t < e. Bisection to absolute 1e-9.
double kl_ucb_upper(double mean, std::uint64_t n_i, std::uint64_t t, double c);

struct BetaPosterior {
  double a = 1.0;
  double b = 1.0;
  void update(double reward) {  // Bernoulli or [0,1]-valued reward
    a += reward;
    b += 1.0 - reward;
  }
  double mean() const { return a / (a + b); }
};

// (1 - 1/t)-quantile of the Beta posterior.
double bayes_ucb_index(const BetaPosterior& posterior, std::uint64_t t);

class Ucb1Policy : public Policy {
 public:
  explicit Ucb1Policy(std::size_t K);
  std::size_t numArms() const override { return stats_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  const std::vector<ArmStats>& stats() const { return stats_; }

 private:
  std::vector<ArmStats> stats_;
};

// Epoch-based UCB: the chosen arm is replayed for its whole epoch before
// indices are compared again.
class Ucb2Policy : public Policy {
 public:
  Ucb2Policy(std::size_t K, double alpha);
  std::size_t numArms() const override { return stats_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;

 private:
  std::vector<ArmStats> stats_;
  std::vector<std::uint64_t> epochs_;  // r_i
  double alpha_;
  ArmId current_ = 0;
  std::uint64_t remaining_ = 0;
  std::uint64_t totalPlays_ = 0;
};

class UcbTunedPolicy : public Policy {
 public:
  explicit UcbTunedPolicy(std::size_t K);
  std::size_t numArms() const override { return stats_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  const std::vector<ArmStats>& stats() const { return stats_; }

 private:
  std::vector<ArmStats> stats_;
};

class MossPolicy : public Policy {
 public:
  MossPolicy(std::size_t K, std::uint64_t H);
  std::size_t numArms() const override { return stats_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;

 private:
  std::vector<ArmStats> stats_;
  std::uint64_t horizon_;
};

class KlUcbPolicy : public Policy {
 public:
  KlUcbPolicy(std::size_t K, double c);
  std::size_t numArms() const override { return stats_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;

 private:
  std::vector<ArmStats> stats_;
  double c_;
};

class BayesUcbPolicy : public Policy {
 public:
  enum class Model { Bernoulli, Gaussian };
  BayesUcbPolicy(std::size_t K, Model model, double priorA = 1.0,
                 double priorB = 1.0, double priorMean = 0.0,
                 double priorVar = 1.0, double obsVar = 1.0);
  std::size_t numArms() const override;
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;

 private:
  Model model_;
  std::vector<BetaPosterior> beta_;
  std::vector<std::uint64_t> counts_;
  std::vector<double> sums_;
  double priorMean_, priorVar_, obsVar_;
  std::size_t K_;
};

}  // namespace bandit
