#include "bandit/math.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bandit {

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("normal_quantile: p outside [0,1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  double lo = -40.0, hi = 40.0;
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

// Continued fraction for I_x(a,b), modified Lentz.
double betacf(double x, double a, double b) {
  const double tiny = 1e-300;
  const double eps = 1e-15;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("reg_inc_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double lnFront = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                   a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(lnFront);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(x, a, b) / a;
  return 1.0 - front * betacf(1.0 - x, b, a) / b;
}

double beta_quantile(double p, double a, double b) {
  if (p < 0.0 || p > 1.0)
    throw std::domain_error("beta_quantile: p outside [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (reg_inc_beta(mid, a, b) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double clamped_gaussian_mean(double mu, double sigma, double lo, double hi) {
  if (sigma <= 0.0) return std::fmin(std::fmax(mu, lo), hi);
  double alpha = (lo - mu) / sigma;
  double beta = (hi - mu) / sigma;
  auto phi = [](double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  };
  double cdfA = normal_cdf(alpha), cdfB = normal_cdf(beta);
  return lo * cdfA + hi * (1.0 - cdfB) + mu * (cdfB - cdfA) -
         sigma * (phi(beta) - phi(alpha));
}

}  // namespace bandit
