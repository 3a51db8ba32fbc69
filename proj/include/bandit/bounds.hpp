#pragma once

#include "bandit/environment.hpp"

namespace bandit {

// Closed-form regret ceilings evaluated against the environment's true gaps.
// The two generic families are scale references with a configurable constant:
// logarithmic c*ln(t) and square-root c*sqrt(K*t*ln(K)).
struct BoundSpec {
  enum class Family {
    Ucb1Gap,
    Ucb2Gap,
    Minimax,
    GenericLog,
    GenericSqrt,
  };
  Family family = Family::Ucb1Gap;
  double alpha = 0.5;  // epoch growth parameter for the Ucb2Gap family
  double c = 1.0;      // scale constant for the generic families
};

enum class BoundVerdict { BelowBound, AboveBound, NotApplicable };

// NaN marks "not applicable": gap-based families on environments without
// stationary known gaps, or an evaluation time before the family's validity
// threshold.
double evaluate_bound(const BoundSpec& spec, const Environment& env,
                      std::uint64_t t);

struct BoundCheck {
  BoundSpec spec;
  double bound = 0.0;
  double observed = 0.0;
  BoundVerdict verdict = BoundVerdict::NotApplicable;
};

BoundCheck check_bound(const BoundSpec& spec, const Environment& env,
                       std::uint64_t t, double observedRegret);

}  // namespace bandit
