#include "bandit/runner.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "bandit/contextual.hpp"
#include "bandit/regret.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bandit {

namespace {

MetricSeries run_discrete(const ExperimentSetup& setup, RngStream& envRng,
                          RngStream& policyRng, RngStream& metricsRng) {
  auto env = setup.makeEnv();
  auto policy = setup.makePolicy();
  PullLog log;
  for (std::uint64_t t = 1; t <= setup.horizon; ++t) {
    PolicyDecision decision = policy->select(t, policyRng);
    PullEntry entry;
    entry.step = t;
    entry.arms = decision.arms;
    entry.rewards.reserve(decision.arms.size());
    for (ArmId arm : decision.arms) {
      entry.rewards.push_back(env->sampleReward(arm, t, envRng));
    }
    policy->observe(t, decision, entry.rewards);
    log.record(std::move(entry));
  }

  MetricSeries series;
  const MetricSelection& sel = setup.metrics;
  if (sel.ee) series["ee"] = expected_expected_regret(log, *env);
  if (sel.ep) series["ep"] = expected_payoff_regret(log, *env);
  if (sel.subopt) series["subopt"] = suboptimal_plays(log, *env);
  if (sel.weak) {
    auto* adv = dynamic_cast<const AdversarialEnv*>(env.get());
    if (adv == nullptr) {
      throw std::logic_error("weak regret needs an adversarial environment");
    }
    series["weak"] = weak_regret(log, *adv);
  }
  if (sel.stat) {
    auto [lo, hi] =
        statistical_regret(log, setup.numArms, sel.statConfidence,
                           sel.statMethod, sel.bootstrapSamples, metricsRng);
    series["stat_lo"] = std::move(lo);
    series["stat_hi"] = std::move(hi);
  }
  return series;
}

MetricSeries run_contextual(const ExperimentSetup& setup, RngStream& envRng,
                            RngStream& policyRng) {
  auto env = setup.makeContextEnv();
  auto policy = setup.makeContextPolicy();
  const std::size_t K = env->numArms();

  std::vector<double> ee, ep;
  double cumEe = 0.0, cumEp = 0.0;
  for (std::uint64_t t = 1; t <= setup.horizon; ++t) {
    const std::vector<double> ctx = env->sampleContext(envRng);
    const std::vector<std::vector<double>> features =
        dummy_interaction_features(ctx, K);
    PolicyDecision decision = policy->select(t, features, policyRng);
    const ArmId arm = decision.arms.front();
    const double reward = env->sampleReward(arm, ctx, envRng);
    policy->observe(t, arm, features[arm], reward);

    double best = env->expectedReward(0, ctx);
    for (std::size_t a = 1; a < K; ++a) {
      best = std::max(best, env->expectedReward(a, ctx));
    }
    if (setup.metrics.ee) {
      cumEe += std::max(0.0, best - env->expectedReward(arm, ctx));
      ee.push_back(cumEe);
    }
    if (setup.metrics.ep) {
      cumEp += best - reward;
      ep.push_back(cumEp);
    }
  }

  MetricSeries series;
  if (setup.metrics.ee) series["ee"] = std::move(ee);
  if (setup.metrics.ep) series["ep"] = std::move(ep);
  return series;
}

MetricSeries run_continuum(const ExperimentSetup& setup, RngStream& envRng,
                           RngStream& policyRng) {
  auto env = setup.makeContinuumEnv();
  auto policy = setup.makeContinuumPolicy();

  std::vector<double> ee;
  double cum = 0.0;
  for (std::uint64_t t = 1; t <= setup.horizon; ++t) {
    const double point = policy->selectPoint(t, policyRng);
    const double reward = env->sampleAt(point, envRng);
    policy->observe(point, reward);
    cum += std::max(0.0, env->oracleValue() - env->meanAt(point));
    ee.push_back(cum);
  }

  MetricSeries series;
  if (setup.metrics.ee) series["ee"] = std::move(ee);
  return series;
}

}  // namespace

MetricSeries run_replication(const ExperimentSetup& setup,
                             std::uint64_t replication) {
  RngStream envRng(setup.seed, replication, 0);
  RngStream policyRng(setup.seed, replication, 1);
  RngStream metricsRng(setup.seed, replication, 2);
  switch (setup.kind) {
    case RunKind::Discrete:
      return run_discrete(setup, envRng, policyRng, metricsRng);
    case RunKind::Contextual:
      return run_contextual(setup, envRng, policyRng);
    case RunKind::Continuum:
      return run_continuum(setup, envRng, policyRng);
  }
  throw std::logic_error("unreachable run kind");
}

ExperimentResult run_experiment(const ExperimentSetup& setup, int workers) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t R = static_cast<std::size_t>(setup.replications);
  std::vector<MetricSeries> perRep(R);

  bool failed = false;
  std::string error;

#ifdef _OPENMP
  if (workers > 1) {
#pragma omp parallel for num_threads(workers) schedule(dynamic)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(R); ++r) {
      try {
        perRep[static_cast<std::size_t>(r)] =
            run_replication(setup, static_cast<std::uint64_t>(r));
      } catch (const std::exception& e) {
#pragma omp critical
        {
          failed = true;
          error = e.what();
        }
      }
    }
  } else
#endif
  {
    for (std::size_t r = 0; r < R; ++r) {
      try {
        perRep[r] = run_replication(setup, r);
      } catch (const std::exception& e) {
        failed = true;
        error = e.what();
        break;
      }
    }
  }
  if (failed) throw std::runtime_error("replication failed: " + error);

  ExperimentResult result;
  result.horizon = setup.horizon;
  result.replications = setup.replications;
  result.workers = workers;

  const std::size_t H = static_cast<std::size_t>(setup.horizon);
  for (const auto& [metric, first] : perRep.front()) {
    AggregateSeries agg;
    agg.mean.assign(H, 0.0);
    agg.sd.assign(H, 0.0);
    for (std::size_t t = 0; t < H; ++t) {
      double sum = 0.0;
      for (std::size_t r = 0; r < R; ++r) sum += perRep[r].at(metric)[t];
      const double mean = sum / static_cast<double>(R);
      agg.mean[t] = mean;
      if (R > 1) {
        double sq = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
          const double d = perRep[r].at(metric)[t] - mean;
          sq += d * d;
        }
        agg.sd[t] = std::sqrt(sq / static_cast<double>(R - 1));
      }
    }
    result.metrics[metric] = std::move(agg);
  }

  if (!setup.bounds.empty() && setup.kind == RunKind::Discrete) {
    std::string reference;
    if (result.metrics.count("weak")) {
      reference = "weak";
    } else if (result.metrics.count("ee")) {
      reference = "ee";
    }
    auto env = setup.makeEnv();
    for (const BoundSpec& spec : setup.bounds) {
      BoundOutcome outcome;
      outcome.spec = spec;
      outcome.reference = reference;
      outcome.observed = reference.empty()
                             ? std::nan("")
                             : result.metrics.at(reference).mean.back();
      BoundCheck check = check_bound(spec, *env, setup.horizon,
                                     outcome.observed);
      outcome.bound = check.bound;
      outcome.verdict = check.verdict;
      result.bounds.push_back(outcome);
    }
  }

  const auto end = std::chrono::steady_clock::now();
  result.wallSeconds =
      std::chrono::duration<double>(end - start).count();
  return result;
}

}  // namespace bandit
