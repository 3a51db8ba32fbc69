#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "bandit/rng.hpp"

namespace bandit {

using ArmId = std::size_t;

constexpr double kUnplayedScore = std::numeric_limits<double>::infinity();

// Per-arm sufficient statistics. The mean is maintained incrementally so it
// stays exact at long horizons; sumSquares feeds variance-aware indices.
struct ArmStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double sumSquares = 0.0;
};

// Throws std::domain_error on non-finite rewards.
void update_stats(ArmStats& stats, double reward);

// Sample variance (n-1 denominator); 0 when count < 2.
double sample_variance(const ArmStats& stats);

// mean, or +inf when the arm has never been played. Every index policy uses
// this sentinel so each arm gets played once before scores are compared.
double mean_or_sentinel(const ArmStats& stats);

// Index of a maximal score; ties are broken uniformly at random. NaN entries
// are ignored; rng is consumed only when two or more entries tie.
// Throws std::domain_error when no comparable entry exists.
ArmId argmax_tiebreak(const std::vector<double>& scores, RngStream& rng);

// Indices of the m largest values. The boundary tie (values equal to the
// m-th largest) is resolved uniformly at random among the tied candidates.
std::vector<ArmId> top_m_tiebreak(const std::vector<double>& scores,
                                  std::size_t m, RngStream& rng);

struct PolicyDecision {
  std::vector<ArmId> arms;     // size m, distinct
  std::vector<double> scores;  // optional diagnostics, empty if unused
};

struct PullEntry {
  std::uint64_t step = 0;          // 1-based
  std::vector<ArmId> arms;         // chosen arm(s); empty for continuum plays
  std::vector<double> rewards;     // one per chosen arm (or one per point)
  std::vector<double> context;     // world context, empty if none
  double point = 0.0;              // continuum play location
  bool hasPoint = false;
};

// Append-only play record; the single source of truth for estimators and
// regret metrics. Steps must advance by exactly 1.
class PullLog {
 public:
  void record(PullEntry entry);
  void recordSingle(std::uint64_t step, ArmId arm, double reward);
  void recordPoint(std::uint64_t step, double point, double reward);

  const std::vector<PullEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<PullEntry> entries_;
};

}  // namespace bandit
