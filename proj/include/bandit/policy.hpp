#pragma once

#include <cstdint>
#include <vector>

#include "bandit/rng.hpp"
#include "bandit/types.hpp"

namespace bandit {

// Uniform select -> observe contract for discrete-armed policies. One
// instance per replication; single-threaded.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::size_t numArms() const = 0;
  virtual PolicyDecision select(std::uint64_t t, RngStream& rng) = 0;
  virtual void observe(std::uint64_t t, const PolicyDecision& decision,
                       const std::vector<double>& rewards) = 0;
  virtual std::size_t playsPerStep() const { return 1; }
};

// Contextual policies see per-arm feature vectors before choosing.
class ContextualPolicy {
 public:
  virtual ~ContextualPolicy() = default;
  virtual PolicyDecision select(
      std::uint64_t t, const std::vector<std::vector<double>>& armFeatures,
      RngStream& rng) = 0;
  virtual void observe(std::uint64_t t, ArmId arm,
                       const std::vector<double>& features, double reward) = 0;
};

// Continuum-armed policies play a point in [0,1].
class ContinuumPolicy {
 public:
  virtual ~ContinuumPolicy() = default;
  virtual double selectPoint(std::uint64_t t, RngStream& rng) = 0;
  virtual void observe(double point, double reward) = 0;
  virtual double recommend() const = 0;
};

}  // namespace bandit
