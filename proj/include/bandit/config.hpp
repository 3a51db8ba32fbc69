#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bandit/bounds.hpp"
#include "bandit/environment.hpp"
#include "bandit/policy.hpp"
#include "bandit/regret.hpp"

namespace bandit {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Sections of key = value pairs. Sorted maps so the echo written into the
// run summary is deterministic and round-trips to the same object.
struct ParsedConfig {
  std::map<std::string, std::map<std::string, std::string>> sections;

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string getOr(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
  double getDouble(const std::string& section, const std::string& key) const;
  double getDoubleOr(const std::string& section, const std::string& key,
                     double fallback) const;
  std::uint64_t getUint(const std::string& section,
                        const std::string& key) const;
  std::uint64_t getUintOr(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;

  bool operator==(const ParsedConfig& other) const {
    return sections == other.sections;
  }
};

// Full-line comments start with '#' or ';'. Keys and values are trimmed;
// values keep interior whitespace.
ParsedConfig parse_config_text(const std::string& text);
ParsedConfig parse_config_file(const std::string& path);

// Comma list of doubles such as "0.9, 0.6".
std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& where);

// Comma list of family specs: "ucb1-gap", "ucb2-gap:0.5" (alpha),
// "minimax", "log:2.5" (coefficient), "sqrt:4.0" (coefficient).
std::vector<BoundSpec> parse_bound_list(const std::string& text);
std::string bound_family_name(BoundSpec::Family family);

enum class RunKind { Discrete, Contextual, Continuum };

struct MetricSelection {
  bool ee = false;
  bool ep = false;
  bool subopt = false;
  bool stat = false;
  bool weak = false;
  double statConfidence = 0.9;
  StatMethod statMethod = StatMethod::Parametric;
  std::size_t bootstrapSamples = 1000;
};

// Everything the runner needs. The factories hand out fresh instances so
// replications stay independent (and safe to build inside parallel loops).
struct ExperimentSetup {
  RunKind kind = RunKind::Discrete;
  std::uint64_t horizon = 1;
  std::uint64_t replications = 1;
  std::uint64_t seed = 1;
  std::size_t numArms = 0;
  std::size_t playsPerStep = 1;
  std::string policyName;
  std::string envKind;
  MetricSelection metrics;
  std::vector<BoundSpec> bounds;
  std::string outputDir = "results";
  ParsedConfig raw;

  std::function<std::unique_ptr<Environment>()> makeEnv;
  std::function<std::unique_ptr<Policy>()> makePolicy;
  std::function<std::unique_ptr<ContextualLinearEnv>()> makeContextEnv;
  std::function<std::unique_ptr<ContextualPolicy>()> makeContextPolicy;
  std::function<std::unique_ptr<ContinuumEnv>()> makeContinuumEnv;
  std::function<std::unique_ptr<ContinuumPolicy>()> makeContinuumPolicy;
};

// Validates everything up front (one throwaway instance of the policy and
// environment is built to surface constructor errors as ConfigError).
ExperimentSetup build_experiment(const ParsedConfig& config);

struct PolicyInfo {
  std::string name;
  std::string kind;    // discrete | contextual | continuum
  std::string params;  // accepted [policy] keys
  std::string summary;
};

const std::vector<PolicyInfo>& policy_registry();

}  // namespace bandit
