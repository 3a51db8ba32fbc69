#pragma once

#include "bandit/policy.hpp"

namespace bandit {

// Incremental ridge accumulation: A = sum of w*x*x' + lambda*I, b = sum of
// w*x*y. sumYY and n feed the residual variance estimate.
struct RidgeState {
  std::size_t d = 0;
  double lambda = 1.0;
  std::vector<double> A;  // row-major d x d
  std::vector<double> b;
  double sumYY = 0.0;
  std::uint64_t n = 0;
  RidgeState() = default;
  RidgeState(std::size_t dim, double lam);
};

void ridge_update(RidgeState& state, const std::vector<double>& x, double y,
                  double weight = 1.0);
std::vector<double> ridge_theta(const RidgeState& state);
// x' A^{-1} x via a Cholesky solve.
double ridge_predictive_var(const RidgeState& state,
                            const std::vector<double>& x);
// Residual mean square with df correction; 1.0 before 2 residual degrees of
// freedom, floored at 1e-6 afterwards.
double ridge_sigma2(const RidgeState& state);

double linucb_score(const RidgeState& state, const std::vector<double>& x,
                    double alpha);
double lints_sample(const RidgeState& state, const std::vector<double>& x,
                    RngStream& rng);

struct WlsPoint {
  std::vector<double> x;
  double y = 0.0;
  double weight = 1.0;
};

RidgeState wls_fit(const std::vector<WlsPoint>& data, std::size_t d,
                   double lambda);

enum class DecayKind { Linear, Exponential };

// Linear: 1/(c*max(age,1)), c > 0. Exponential: 1/c^age, c > 1.
double decay_weight(DecayKind kind, double c, std::uint64_t age);

// Per-arm dummy plus arm-by-context interaction encoding: feature length
// K*(1+len(context)); arm i fills slot i and interaction block i.
std::vector<std::vector<double>> dummy_interaction_features(
    const std::vector<double>& context, std::size_t K);

class LinUcbPolicy : public ContextualPolicy {
 public:
  LinUcbPolicy(std::size_t d, double alpha, double lambda = 1.0);
  PolicyDecision select(std::uint64_t t,
                        const std::vector<std::vector<double>>& armFeatures,
                        RngStream& rng) override;
  void observe(std::uint64_t t, ArmId arm, const std::vector<double>& features,
               double reward) override;
  const RidgeState& state() const { return state_; }

 private:
  RidgeState state_;
  double alpha_;
};

class LinTsPolicy : public ContextualPolicy {
 public:
  explicit LinTsPolicy(std::size_t d, double lambda = 1.0);
  PolicyDecision select(std::uint64_t t,
                        const std::vector<std::vector<double>>& armFeatures,
                        RngStream& rng) override;
  void observe(std::uint64_t t, ArmId arm, const std::vector<double>& features,
               double reward) override;
  const RidgeState& state() const { return state_; }

 private:
  RidgeState state_;
};

// LinTS over a weighted refit where observation weights decay with age
// (trial-count difference), for drifting linear models.
class DecayedLinTsPolicy : public ContextualPolicy {
 public:
  DecayedLinTsPolicy(std::size_t d, DecayKind kind, double c,
                     double lambda = 1.0);
  PolicyDecision select(std::uint64_t t,
                        const std::vector<std::vector<double>>& armFeatures,
                        RngStream& rng) override;
  void observe(std::uint64_t t, ArmId arm, const std::vector<double>& features,
               double reward) override;

 private:
  struct Obs {
    std::vector<double> x;
    double y;
    std::uint64_t step;
  };
  std::size_t d_;
  DecayKind kind_;
  double c_;
  double lambda_;
  std::vector<Obs> data_;
};

}  // namespace bandit
