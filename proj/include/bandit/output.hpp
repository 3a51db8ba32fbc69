#pragma once

#include <string>

#include "bandit/config.hpp"
#include "bandit/runner.hpp"

namespace bandit {

// Shortest decimal string that parses back to the identical double.
std::string format_double(double v);

// Header "step,<metric>_mean,<metric>_sd,..." then one row per step, columns
// in metric-name order. Deterministic byte for byte given equal inputs.
std::string results_csv(const ExperimentResult& result);

// Inverse of results_csv; only the metric series and horizon are recovered.
ExperimentResult parse_results_csv(const std::string& text);

// Config echo (re-parsing it yields the identical ParsedConfig), run stats,
// final metric values and bound comparisons.
std::string summary_json(const ExperimentSetup& setup,
                         const ExperimentResult& result);

// Self-contained chart: one line per metric mean with a +-1 sd band.
std::string results_svg(const ExperimentResult& result,
                        const std::string& title);

struct OutputPaths {
  std::string csv;
  std::string json;
  std::string svg;
};

// Writes results.csv, summary.json and chart.svg under dir (created if
// needed).
OutputPaths write_outputs(const ExperimentSetup& setup,
                          const ExperimentResult& result,
                          const std::string& dir);

}  // namespace bandit
