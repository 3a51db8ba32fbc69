#pragma once

#include <utility>

#include "bandit/environment.hpp"
#include "bandit/types.hpp"

namespace bandit {

// Cumulative series are 1-based in step; element [i] covers steps 1..i+1.
// Oracle shortfall using expected values on both sides; non-decreasing.
std::vector<double> expected_expected_regret(const PullLog& log,
                                             const Environment& env);

// Oracle expectation minus the realized reward; may decrease.
std::vector<double> expected_payoff_regret(const PullLog& log,
                                           const Environment& env);

// Count of steps whose selection was not expectation-maximal; a tie with the
// best arm counts as optimal. Multi-play compares the selected set's oracle
// sum against the top-m oracle sum.
std::vector<double> suboptimal_plays(const PullLog& log,
                                     const Environment& env);

enum class StatMethod { Parametric, Bootstrap };

// Data-only regret interval: per-arm confidence intervals for the means are
// built once from the final log and applied retrospectively to every play.
// Parametric needs every arm played twice, Bootstrap once; otherwise both
// series are NaN (the undefined marker).
std::pair<std::vector<double>, std::vector<double>> statistical_regret(
    const PullLog& log, std::size_t numArms, double gammaConf,
    StatMethod method, std::size_t bootstrapB, RngStream& rng);

// Shortfall against the single fixed arm with the largest total reward over
// the whole table horizon.
std::vector<double> weak_regret(const PullLog& log, const AdversarialEnv& env);

}  // namespace bandit
