#pragma once

#include "bandit/policy.hpp"
#include "bandit/sampling.hpp"

namespace bandit {

struct HooNode {
  double lo = 0.0;
  double hi = 1.0;
  std::uint32_t depth = 0;
  std::uint64_t n = 0;
  double mean = 0.0;
  double u = 0.0;
  double b = 0.0;
  int left = -1;
  int right = -1;
};

// mean + sqrt(2 ln n / N) + v1 * rho^depth; +inf when unvisited.
double hoo_uvalue(double mean, std::uint64_t N, std::uint64_t n,
                  std::uint32_t depth, double rho, double v1);

// Binary-partition optimistic search over [0,1). Each step descends by
// maximal B-value, splits the reached leaf, and plays a uniform point inside
// it; B-values are rebuilt bottom-up after every reward.
class HooPolicy : public ContinuumPolicy {
 public:
  HooPolicy(double rho = 0.5, double v1 = 1.0, std::uint32_t maxDepth = 40);
  double selectPoint(std::uint64_t t, RngStream& rng) override;
  void observe(double point, double reward) override;
  double recommend() const override;
  const std::vector<HooNode>& nodes() const { return nodes_; }
  std::uint64_t totalPlays() const { return total_; }

 private:
  void rebuildValues();
  std::vector<HooNode> nodes_;
  std::vector<int> path_;
  std::uint64_t total_ = 0;
  double rho_, v1_;
  std::uint32_t maxDepth_;
};

// Top-m posterior draws; m=1 delegates to the single-play selector so the
// reduction is exact on a shared rng stream.
PolicyDecision mp_ts_select(const PosteriorBank& bank, std::size_t m,
                            RngStream& rng);

// m-1 slots by top empirical means, final slot by a posterior draw over the
// remaining arms.
PolicyDecision imp_ts_select(const PosteriorBank& bank,
                             const std::vector<ArmStats>& stats, std::size_t m,
                             RngStream& rng);

class MpTsPolicy : public Policy {
 public:
  MpTsPolicy(std::size_t K, std::size_t m, PosteriorBank::Model model,
             double priorA = 1.0, double priorB = 1.0, double priorMean = 0.0,
             double priorVar = 1.0);
  std::size_t numArms() const override { return bank_.size(); }
  std::size_t playsPerStep() const override { return m_; }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  const PosteriorBank& bank() const { return bank_; }

 protected:
  void updateBank(ArmId arm, double reward);
  PosteriorBank bank_;
  std::size_t m_;
};

class ImpTsPolicy : public MpTsPolicy {
 public:
  ImpTsPolicy(std::size_t K, std::size_t m, PosteriorBank::Model model,
              double priorA = 1.0, double priorB = 1.0, double priorMean = 0.0,
              double priorVar = 1.0);
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;

 private:
  std::vector<ArmStats> stats_;
};

}  // namespace bandit
