#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "bandit/adversarial.hpp"
#include "bandit/policy.hpp"
#include "bandit/ucb.hpp"

namespace bandit {

// Exponentially discounted sufficient statistics: every recorded step first
// multiplies all accumulators by gamma, then adds the new observation.
struct DiscountedStats {
  double gamma = 1.0;
  std::vector<double> num;  // discounted reward sums
  std::vector<double> cnt;  // discounted play counts
  DiscountedStats() = default;
  DiscountedStats(std::size_t K, double g);
  void record(ArmId arm, double reward);
  double totalCount() const;
};

// Unplayed arms yield +inf (sentinel, not an error).
double ducb_mean(const DiscountedStats& stats, ArmId arm);
// 2B * sqrt(xi * ln(sum_j cnt_j) / cnt_arm).
double ducb_pad(const DiscountedStats& stats, ArmId arm, double B, double xi);

struct WindowBuffer {
  std::size_t tau = 1;
  WindowBuffer() = default;
  explicit WindowBuffer(std::size_t windowLen);
  void push(ArmId arm, double reward);
  std::size_t size() const { return ring_.size(); }
  std::uint64_t count(ArmId arm) const;
  double sum(ArmId arm) const;

 private:
  std::vector<std::pair<ArmId, double>> ring_;
  std::size_t head_ = 0;
};

double swucb_mean(const WindowBuffer& buffer, ArmId arm);
// B * sqrt(xi * ln(min(t, tau)) / N_window(arm)).
double swucb_pad(const WindowBuffer& buffer, ArmId arm, double B, double xi,
                 std::uint64_t t);

// Two-sided mean-shift detector on a stream. The running mean absorbs each
// observation before the deviation accumulators move, so a constant stream
// drifts the statistics away from their extrema and never alarms.
struct PhState {
  double delta = 0.005;
  double lambda = 50.0;
  std::uint64_t n = 0;
  double mean = 0.0;
  double mUp = 0.0, minUp = 0.0;
  double mDown = 0.0, maxDown = 0.0;
};

bool ph_update(PhState& state, double x);

struct KalmanArm {
  double mu = 0.0;
  double var = 1.0;
};

void kalman_update(KalmanArm& arm, double x, double obsVar, double trVar);
void kalman_idle(KalmanArm& arm, double trVar);

class DiscountedUcbPolicy : public Policy {
 public:
  DiscountedUcbPolicy(std::size_t K, double gamma, double B = 1.0,
                      double xi = 0.5);
  std::size_t numArms() const override { return stats_.num.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  const DiscountedStats& stats() const { return stats_; }

 private:
  DiscountedStats stats_;
  double B_, xi_;
};

class SlidingWindowUcbPolicy : public Policy {
 public:
  SlidingWindowUcbPolicy(std::size_t K, std::size_t tau, double B = 1.0,
                         double xi = 0.5);
  std::size_t numArms() const override { return K_; }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;

 private:
  std::size_t K_;
  WindowBuffer buffer_;
  double B_, xi_;
};

// Changepoint-reactive meta-bandit: an inner policy plays until the detector
// alarms, then a 2-arm meta-bandit arbitrates between the trained instance
// and a fresh one for a fixed evaluation window; the higher-mean instance
// (ties to the incumbent) becomes the sole policy and detection resumes.
class AdaptEvePolicy : public Policy {
 public:
  using InnerFactory = std::function<std::unique_ptr<Policy>(std::size_t)>;
  AdaptEvePolicy(std::size_t K, double phDelta = 0.005, double phLambda = 50.0,
                 std::uint64_t metaPeriod = 200,
                 InnerFactory innerFactory = nullptr);
  std::size_t numArms() const override { return K_; }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  bool inMetaPhase() const { return inMeta_; }
  std::uint64_t alarmCount() const { return alarms_; }

 private:
  void resetDetector();
  std::size_t K_;
  std::uint64_t metaPeriod_;
  InnerFactory factory_;
  std::unique_ptr<Policy> inner_;
  PhState ph_;
  double phDelta_, phLambda_;
  bool inMeta_ = false;
  std::unique_ptr<Policy> challenger_;
  std::unique_ptr<UcbTunedPolicy> meta_;
  std::uint64_t metaSteps_ = 0;
  std::size_t lastCandidate_ = 0;
  PolicyDecision lastMetaDecision_;
  std::uint64_t alarms_ = 0;
};

// Exponential-weights play with drift-triggered resets: time is partitioned
// into intervals holding a fixed number of uniform exploratory draws, and a
// dormant arm outscoring the believed-best arm's interval mean by the margin
// resets all weights.
class Exp3RPolicy : public Policy {
 public:
  Exp3RPolicy(std::size_t K, double gamma, std::uint64_t intervalObs = 100,
              double epsilonDrift = 0.05, double rewardLo = 0.0,
              double rewardHi = 1.0);
  std::size_t numArms() const override { return exp3_.numArms(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  std::uint64_t resetCount() const { return resets_; }

 private:
  Exp3Policy exp3_;
  std::uint64_t intervalObs_;
  double epsilonDrift_;
  double lo_, hi_;
  std::vector<double> intervalSum_;
  std::vector<std::uint64_t> intervalCnt_;
  std::uint64_t obsInInterval_ = 0;
  std::uint64_t resets_ = 0;
};

class KalmanPolicy : public Policy {
 public:
  enum class Mode { ThompsonDraw, UpperConfidence };
  KalmanPolicy(std::size_t K, double obsVar, double trVar, double rewardLo,
               double rewardHi, Mode mode = Mode::ThompsonDraw);
  std::size_t numArms() const override { return arms_.size(); }
  PolicyDecision select(std::uint64_t t, RngStream& rng) override;
  void observe(std::uint64_t t, const PolicyDecision& decision,
               const std::vector<double>& rewards) override;
  const std::vector<KalmanArm>& arms() const { return arms_; }

 private:
  std::vector<KalmanArm> arms_;
  double obsVar_, trVar_;
  Mode mode_;
};

}  // namespace bandit
