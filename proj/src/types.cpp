#include "bandit/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bandit {

void update_stats(ArmStats& stats, double reward) {
  if (!std::isfinite(reward))
    throw std::domain_error("update_stats: reward must be finite");
  stats.count += 1;
  stats.mean += (reward - stats.mean) / static_cast<double>(stats.count);
  stats.sumSquares += reward * reward;
}

double sample_variance(const ArmStats& stats) {
  if (stats.count < 2) return 0.0;
  auto n = static_cast<double>(stats.count);
  double centered = stats.sumSquares - n * stats.mean * stats.mean;
  if (centered < 0.0) centered = 0.0;  // numeric guard
  return centered / (n - 1.0);
}

double mean_or_sentinel(const ArmStats& stats) {
  return stats.count == 0 ? kUnplayedScore : stats.mean;
}

ArmId argmax_tiebreak(const std::vector<double>& scores, RngStream& rng) {
  if (scores.empty())
    throw std::domain_error("argmax_tiebreak: empty score list");
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (double s : scores) {
    if (std::isnan(s)) continue;
    if (!any || s > best) {
      best = s;
      any = true;
    }
  }
  if (!any) throw std::domain_error("argmax_tiebreak: all scores are NaN");
  std::vector<ArmId> ties;
  for (ArmId i = 0; i < scores.size(); ++i)
    if (!std::isnan(scores[i]) && scores[i] == best) ties.push_back(i);
  if (ties.size() == 1) return ties.front();
  return ties[rng.uniformIndex(ties.size())];
}

std::vector<ArmId> top_m_tiebreak(const std::vector<double>& scores,
                                  std::size_t m, RngStream& rng) {
  if (m > scores.size())
    throw std::domain_error("top_m_tiebreak: m exceeds score count");
  std::vector<ArmId> order(scores.size());
  for (ArmId i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](ArmId a, ArmId b) { return scores[a] > scores[b]; });
  if (m == 0 || m == scores.size()) return {order.begin(), order.begin() + m};
  double boundary = scores[order[m - 1]];
  // Everything strictly above the boundary value is in; the remaining slots
  // are drawn uniformly from the arms tied at the boundary.
  std::vector<ArmId> result;
  std::vector<ArmId> tied;
  for (ArmId i : order) {
    if (scores[i] > boundary)
      result.push_back(i);
    else if (scores[i] == boundary)
      tied.push_back(i);
  }
  std::size_t need = m - result.size();
  if (tied.size() == need) {
    result.insert(result.end(), tied.begin(), tied.end());
  } else {
    for (std::size_t k = 0; k < need; ++k) {  // partial Fisher-Yates
      std::size_t j = k + rng.uniformIndex(tied.size() - k);
      std::swap(tied[k], tied[j]);
      result.push_back(tied[k]);
    }
  }
  return result;
}

void PullLog::record(PullEntry entry) {
  std::uint64_t expected = entries_.empty() ? 1 : entries_.back().step + 1;
  if (entry.step != expected)
    throw std::domain_error("PullLog: steps must advance by exactly 1");
  entries_.push_back(std::move(entry));
}

void PullLog::recordSingle(std::uint64_t step, ArmId arm, double reward) {
  PullEntry e;
  e.step = step;
  e.arms = {arm};
  e.rewards = {reward};
  record(std::move(e));
}

void PullLog::recordPoint(std::uint64_t step, double point, double reward) {
  PullEntry e;
  e.step = step;
  e.rewards = {reward};
  e.point = point;
  e.hasPoint = true;
  record(std::move(e));
}

}  // namespace bandit
