#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "bandit/policy.hpp"

namespace bandit {

// Exploration schedules for the epsilon-greedy family.
struct EpsilonSchedule {
  enum class Kind { Constant, Vermorel, GreedyMix, EpsilonN, EpsilonFirst };
  Kind kind = Kind::Constant;
  double eps0 = 0.1;  // Constant / Vermorel / EpsilonFirst
  double c = 1.0;     // EpsilonN
  double d = 0.5;     // GreedyMix / EpsilonN: gap lower bound, 0 < d < 1
  std::size_t K = 1;
  std::uint64_t H = 1;  // EpsilonFirst

  static EpsilonSchedule constant(double eps0);
  static EpsilonSchedule vermorel(double eps0);
  static EpsilonSchedule greedyMix(double d, std::size_t K);
  static EpsilonSchedule epsilonN(double c, double d, std::size_t K);
  static EpsilonSchedule epsilonFirst(double eps0, std::uint64_t H);
};

// epsilon(t) for a schedule; always in [0,1]. t >= 1.
double epsilon_at(const EpsilonSchedule& schedule, std::uint64_t t);

// With probability eps a uniform random arm, otherwise the empirical-mean
// argmax (unplayed arms win via the +inf sentinel; ties uniform).
PolicyDecision select_semiuniform(const std::vector<ArmStats>& stats,
                                  double eps, RngStream& rng);

enum class Phase { Explore, Exploit };

// Explore iff t <= ceil(eps0 * H).
Phase epsilon_first_phase(std::uint64_t t, std::uint64_t H, double eps0);

class EpsilonGreedyPolicy : public Policy {
 public:
  EpsilonGreedyPolicy(std::size_t K, EpsilonSchedule schedule);
  std::size_t numArms() const override { return stats_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  const std::vector<ArmStats>& stats() const { return stats_; }

 private:
  std::vector<ArmStats> stats_;
  EpsilonSchedule schedule_;
};

// Explores uniformly for ceil(eps0*H) steps, then exploits the arm that won
// the exploration phase; the winner is frozen at the phase boundary.
class EpsilonFirstPolicy : public Policy {
 public:
  EpsilonFirstPolicy(std::size_t K, double eps0, std::uint64_t H);
  std::size_t numArms() const override { return stats_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;

 private:
  std::vector<ArmStats> stats_;
  double eps0_;
  std::uint64_t horizon_;
  std::optional<ArmId> frozen_;
};

// Runs a fresh inner policy per epoch; the inner policy sees epoch-local
// steps starting at 1.
class EpochWrapPolicy : public Policy {
 public:
  EpochWrapPolicy(std::function<std::unique_ptr<Policy>()> factory,
                  std::uint64_t epochLength);
  std::size_t numArms() const override { return inner_->numArms(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  std::size_t playsPerStep() const override { return inner_->playsPerStep(); }

 private:
  std::function<std::unique_ptr<Policy>()> factory_;
  std::unique_ptr<Policy> inner_;
  std::uint64_t epochLength_;
  std::uint64_t stepsIntoEpoch_ = 0;
};

}  // namespace bandit
