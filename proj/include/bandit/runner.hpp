#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bandit/config.hpp"

namespace bandit {

// One replication's cumulative metric series, keyed by metric name ("ee",
// "ep", "subopt", "stat_lo", "stat_hi", "weak"). Each series has one entry
// per step.
using MetricSeries = std::map<std::string, std::vector<double>>;

// Replication r draws from rng streams keyed by (seed, r, substream) with
// substream 0 for the environment, 1 for the policy and 2 for metrics, so
// replications are independent and order-insensitive.
MetricSeries run_replication(const ExperimentSetup& setup,
                             std::uint64_t replication);

struct AggregateSeries {
  std::vector<double> mean;
  std::vector<double> sd;  // sample sd across replications; 0 when R == 1
};

struct BoundOutcome {
  BoundSpec spec;
  double bound = 0.0;
  double observed = 0.0;
  BoundVerdict verdict = BoundVerdict::NotApplicable;
  std::string reference;  // metric the bound was compared against
};

struct ExperimentResult {
  std::map<std::string, AggregateSeries> metrics;
  std::vector<BoundOutcome> bounds;
  std::uint64_t horizon = 0;
  std::uint64_t replications = 0;
  int workers = 1;
  double wallSeconds = 0.0;
};

// workers <= 1 runs the replication loop serially; > 1 spreads it over that
// many threads when built with OpenMP. Aggregation always reduces the stored
// per-replication series in replication order, so the two modes produce bit
// identical results.
ExperimentResult run_experiment(const ExperimentSetup& setup, int workers);

}  // namespace bandit
