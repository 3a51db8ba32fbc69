#include "bandit/extended.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bandit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double hoo_uvalue(double mean, std::uint64_t N, std::uint64_t n,
                  std::uint32_t depth, double rho, double v1) {
  if (N == 0) return kInf;
  return mean +
         std::sqrt(2.0 * std::log(static_cast<double>(n)) /
                   static_cast<double>(N)) +
         v1 * std::pow(rho, static_cast<double>(depth));
}

HooPolicy::HooPolicy(double rho, double v1, std::uint32_t maxDepth)
    : rho_(rho), v1_(v1), maxDepth_(maxDepth) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("rho must lie in (0,1)");
  if (!(v1 > 0.0)) throw std::invalid_argument("v1 must be positive");
  HooNode root;
  root.lo = 0.0;
  root.hi = 1.0;
  root.u = kInf;
  root.b = kInf;
  nodes_.push_back(root);
}

double HooPolicy::selectPoint(std::uint64_t, RngStream& rng) {
  path_.clear();
  int cur = 0;
  path_.push_back(cur);
  while (nodes_[cur].left >= 0) {
    int l = nodes_[cur].left, r = nodes_[cur].right;
    double bl = nodes_[l].b, br = nodes_[r].b;
    if (bl > br)
      cur = l;
    else if (br > bl)
      cur = r;
    else
      cur = rng.uniformIndex(2) == 0 ? l : r;
    path_.push_back(cur);
  }
  double lo = nodes_[cur].lo, hi = nodes_[cur].hi;
  std::uint32_t depth = nodes_[cur].depth;
  if (depth < maxDepth_) {
    double mid = 0.5 * (lo + hi);
    HooNode child;
    child.depth = depth + 1;
    child.u = kInf;
    child.b = kInf;
    child.lo = lo;
    child.hi = mid;
    int li = static_cast<int>(nodes_.size());
    nodes_.push_back(child);
    child.lo = mid;
    child.hi = hi;
    nodes_.push_back(child);
    nodes_[cur].left = li;
    nodes_[cur].right = li + 1;
  }
  return lo + rng.uniform01() * (hi - lo);
}

void HooPolicy::observe(double, double reward) {
  total_ += 1;
  for (int idx : path_) {
    HooNode& node = nodes_[idx];
    node.n += 1;
    node.mean += (reward - node.mean) / static_cast<double>(node.n);
  }
  rebuildValues();
}

void HooPolicy::rebuildValues() {
  // Children are appended after their parent, so a reverse sweep is a
  // bottom-up pass.
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    HooNode& node = nodes_[i];
    node.u = hoo_uvalue(node.mean, node.n, total_, node.depth, rho_, v1_);
    if (node.left < 0) {
      node.b = node.u;
    } else {
      node.b = std::min(node.u,
                        std::max(nodes_[node.left].b, nodes_[node.right].b));
    }
  }
}

double HooPolicy::recommend() const {
  int best = 0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const HooNode& c = nodes_[i];
    if (c.n == 0) continue;
    const HooNode& b = nodes_[best];
    if (c.depth > b.depth ||
        (c.depth == b.depth && (c.n > b.n || (c.n == b.n && c.lo < b.lo))))
      best = static_cast<int>(i);
  }
  return 0.5 * (nodes_[best].lo + nodes_[best].hi);
}

PolicyDecision mp_ts_select(const PosteriorBank& bank, std::size_t m,
                            RngStream& rng) {
  if (m == 0 || m > bank.size())
    throw std::domain_error("plays per step must lie in [1, K]");
  if (m == 1) return thompson_select(bank, rng);
  std::vector<double> draws(bank.size());
  for (std::size_t i = 0; i < draws.size(); ++i)
    draws[i] = bank.drawPosterior(i, rng);
  PolicyDecision d;
  d.arms = top_m_tiebreak(draws, m, rng);
  d.scores = std::move(draws);
  return d;
}

PolicyDecision imp_ts_select(const PosteriorBank& bank,
                             const std::vector<ArmStats>& stats, std::size_t m,
                             RngStream& rng) {
  if (stats.size() != bank.size())
    throw std::domain_error("stats/bank size mismatch");
  if (m == 0 || m > bank.size())
    throw std::domain_error("plays per step must lie in [1, K]");
  if (m == 1) return thompson_select(bank, rng);
  std::vector<double> means(stats.size());
  for (std::size_t i = 0; i < stats.size(); ++i)
    means[i] = mean_or_sentinel(stats[i]);
  PolicyDecision d;
  d.arms = top_m_tiebreak(means, m - 1, rng);
  if (m - 1 == bank.size()) return d;  // nothing left to sample
  std::vector<bool> taken(bank.size(), false);
  for (ArmId a : d.arms) taken[a] = true;
  std::vector<double> draws(bank.size(),
                            -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < bank.size(); ++i)
    if (!taken[i]) draws[i] = bank.drawPosterior(i, rng);
  d.arms.push_back(argmax_tiebreak(draws, rng));
  return d;
}

MpTsPolicy::MpTsPolicy(std::size_t K, std::size_t m,
                       PosteriorBank::Model model, double priorA,
                       double priorB, double priorMean, double priorVar)
    : m_(m) {
  if (K == 0) throw std::invalid_argument("need at least one arm");
  if (m == 0 || m > K)
    throw std::invalid_argument("plays per step must lie in [1, K]");
  bank_.model = model;
  if (model == PosteriorBank::Model::Bernoulli) {
    if (!(priorA > 0.0 && priorB > 0.0))
      throw std::invalid_argument("Beta prior parameters must be positive");
    bank_.beta.assign(K, BetaPosterior{priorA, priorB});
  } else {
    if (!(priorVar > 0.0))
      throw std::invalid_argument("prior variance must be positive");
    GaussianArmPosterior p;
    p.priorMean = priorMean;
    p.priorVar = priorVar;
    bank_.gauss.assign(K, p);
  }
}

PolicyDecision MpTsPolicy::select(std::uint64_t, RngStream& rng) {
  return mp_ts_select(bank_, m_, rng);
}

void MpTsPolicy::updateBank(ArmId arm, double reward) {
  bank_.update(arm, reward);
}

void MpTsPolicy::observe(std::uint64_t, const PolicyDecision& d,
                         const std::vector<double>& rewards) {
  for (std::size_t i = 0; i < d.arms.size(); ++i)
    updateBank(d.arms[i], rewards.at(i));
}

ImpTsPolicy::ImpTsPolicy(std::size_t K, std::size_t m,
                         PosteriorBank::Model model, double priorA,
                         double priorB, double priorMean, double priorVar)
    : MpTsPolicy(K, m, model, priorA, priorB, priorMean, priorVar),
      stats_(K) {}

PolicyDecision ImpTsPolicy::select(std::uint64_t, RngStream& rng) {
  return imp_ts_select(bank_, stats_, m_, rng);
}

void ImpTsPolicy::observe(std::uint64_t, const PolicyDecision& d,
                          const std::vector<double>& rewards) {
  for (std::size_t i = 0; i < d.arms.size(); ++i) {
    updateBank(d.arms[i], rewards.at(i));
    update_stats(stats_.at(d.arms[i]), rewards.at(i));
  }
}

}  // namespace bandit
