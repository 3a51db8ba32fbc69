#include "bandit/contextual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bandit {

namespace {

std::vector<double> choleskyFactor(const std::vector<double>& A,
                                   std::size_t d) {
  std::vector<double> L(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = A[i * d + j];
      for (std::size_t k = 0; k < j; ++k) sum -= L[i * d + k] * L[j * d + k];
      if (i == j) {
        if (!(sum > 0.0))
          throw std::domain_error("Gram matrix not positive definite");
        L[i * d + i] = std::sqrt(sum);
      } else {
        L[i * d + j] = sum / L[j * d + j];
      }
    }
  }
  return L;
}

std::vector<double> choleskySolve(const std::vector<double>& L, std::size_t d,
                                  const std::vector<double>& rhs) {
  std::vector<double> y(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= L[i * d + k] * y[k];
    y[i] = s / L[i * d + i];
  }
  std::vector<double> x(d);
  for (std::size_t ii = d; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < d; ++k) s -= L[k * d + ii] * x[k];
    x[ii] = s / L[ii * d + ii];
  }
  return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void requireDim(const RidgeState& state, const std::vector<double>& x) {
  if (x.size() != state.d)
    throw std::domain_error("feature dimension mismatch");
  for (double v : x)
    if (!std::isfinite(v)) throw std::domain_error("non-finite feature");
}

}  // namespace

RidgeState::RidgeState(std::size_t dim, double lam)
    : d(dim), lambda(lam), A(dim * dim, 0.0), b(dim, 0.0) {
  if (dim == 0) throw std::invalid_argument("dimension must be >= 1");
  if (!(lam > 0.0)) throw std::invalid_argument("lambda must be positive");
  for (std::size_t i = 0; i < dim; ++i) A[i * dim + i] = lam;
}

void ridge_update(RidgeState& state, const std::vector<double>& x, double y,
                  double weight) {
  requireDim(state, x);
  if (!std::isfinite(y)) throw std::domain_error("non-finite response");
  if (!(weight > 0.0)) throw std::domain_error("weight must be positive");
  for (std::size_t i = 0; i < state.d; ++i) {
    for (std::size_t j = 0; j < state.d; ++j)
      state.A[i * state.d + j] += weight * x[i] * x[j];
    state.b[i] += weight * x[i] * y;
  }
  state.sumYY += weight * y * y;
  state.n += 1;
}

std::vector<double> ridge_theta(const RidgeState& state) {
  return choleskySolve(choleskyFactor(state.A, state.d), state.d, state.b);
}

double ridge_predictive_var(const RidgeState& state,
                            const std::vector<double>& x) {
  requireDim(state, x);
  auto z = choleskySolve(choleskyFactor(state.A, state.d), state.d, x);
  return std::max(0.0, dot(x, z));
}

double ridge_sigma2(const RidgeState& state) {
  if (state.n < state.d + 2) return 1.0;
  auto theta = ridge_theta(state);
  double normSq = dot(theta, theta);
  double rss = state.sumYY - dot(theta, state.b) - state.lambda * normSq;
  rss = std::max(0.0, rss);
  double df = static_cast<double>(state.n - state.d);
  return std::max(rss / df, 1e-6);
}

double linucb_score(const RidgeState& state, const std::vector<double>& x,
                    double alpha) {
  if (!(alpha >= 0.0)) throw std::domain_error("alpha must be >= 0");
  double mean = dot(ridge_theta(state), x);
  return mean + alpha * std::sqrt(ridge_predictive_var(state, x));
}

double lints_sample(const RidgeState& state, const std::vector<double>& x,
                    RngStream& rng) {
  double mean = dot(ridge_theta(state), x);
  double sd = std::sqrt(ridge_sigma2(state) * ridge_predictive_var(state, x));
  return mean + sd * rng.gaussian();
}

RidgeState wls_fit(const std::vector<WlsPoint>& data, std::size_t d,
                   double lambda) {
  RidgeState state(d, lambda);
  for (const auto& p : data) ridge_update(state, p.x, p.y, p.weight);
  return state;
}

double decay_weight(DecayKind kind, double c, std::uint64_t age) {
  if (kind == DecayKind::Linear) {
    if (!(c > 0.0)) throw std::domain_error("linear decay needs c > 0");
    return 1.0 / (c * static_cast<double>(std::max<std::uint64_t>(age, 1)));
  }
  if (!(c > 1.0)) throw std::domain_error("exponential decay needs c > 1");
  return std::pow(c, -static_cast<double>(age));
}

std::vector<std::vector<double>> dummy_interaction_features(
    const std::vector<double>& context, std::size_t K) {
  if (K == 0) throw std::domain_error("need at least one arm");
  std::size_t c = context.size();
  std::vector<std::vector<double>> features(
      K, std::vector<double>(K * (1 + c), 0.0));
  for (std::size_t i = 0; i < K; ++i) {
    features[i][i] = 1.0;
    for (std::size_t j = 0; j < c; ++j)
      features[i][K + i * c + j] = context[j];
  }
  return features;
}

LinUcbPolicy::LinUcbPolicy(std::size_t d, double alpha, double lambda)
    : state_(d, lambda), alpha_(alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
}

PolicyDecision LinUcbPolicy::select(
    std::uint64_t, const std::vector<std::vector<double>>& armFeatures,
    RngStream& rng) {
  std::vector<double> scores(armFeatures.size());
  for (std::size_t i = 0; i < armFeatures.size(); ++i)
    scores[i] = linucb_score(state_, armFeatures[i], alpha_);
  PolicyDecision d;
  d.arms = {argmax_tiebreak(scores, rng)};
  d.scores = std::move(scores);
  return d;
}

void LinUcbPolicy::observe(std::uint64_t, ArmId, const std::vector<double>& x,
                           double reward) {
  ridge_update(state_, x, reward);
}

LinTsPolicy::LinTsPolicy(std::size_t d, double lambda) : state_(d, lambda) {}

PolicyDecision LinTsPolicy::select(
    std::uint64_t, const std::vector<std::vector<double>>& armFeatures,
    RngStream& rng) {
  std::vector<double> draws(armFeatures.size());
  for (std::size_t i = 0; i < armFeatures.size(); ++i)
    draws[i] = lints_sample(state_, armFeatures[i], rng);
  PolicyDecision d;
  d.arms = {argmax_tiebreak(draws, rng)};
  d.scores = std::move(draws);
  return d;
}

void LinTsPolicy::observe(std::uint64_t, ArmId, const std::vector<double>& x,
                          double reward) {
  ridge_update(state_, x, reward);
}

DecayedLinTsPolicy::DecayedLinTsPolicy(std::size_t d, DecayKind kind, double c,
                                       double lambda)
    : d_(d), kind_(kind), c_(c), lambda_(lambda) {
  if (d == 0) throw std::invalid_argument("dimension must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  decay_weight(kind, c, 1);  // validates c for the chosen kind
}

PolicyDecision DecayedLinTsPolicy::select(
    std::uint64_t t, const std::vector<std::vector<double>>& armFeatures,
    RngStream& rng) {
  std::vector<WlsPoint> weighted;
  weighted.reserve(data_.size());
  for (const auto& obs : data_)
    weighted.push_back({obs.x, obs.y, decay_weight(kind_, c_, t - obs.step)});
  RidgeState state = wls_fit(weighted, d_, lambda_);
  std::vector<double> draws(armFeatures.size());
  for (std::size_t i = 0; i < armFeatures.size(); ++i)
    draws[i] = lints_sample(state, armFeatures[i], rng);
  PolicyDecision d;
  d.arms = {argmax_tiebreak(draws, rng)};
  d.scores = std::move(draws);
  return d;
}

void DecayedLinTsPolicy::observe(std::uint64_t t, ArmId,
                                 const std::vector<double>& x, double reward) {
  data_.push_back({x, reward, t});
}

}  // namespace bandit
