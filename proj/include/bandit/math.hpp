#pragma once

namespace bandit {

// Standard normal CDF via erfc.
double normal_cdf(double x);

// Inverse standard normal CDF, bisection to 1e-12. p in (0,1); the closed
// endpoints map to -inf / +inf.
double normal_quantile(double p);

// Regularized incomplete beta I_x(a,b), continued-fraction evaluation.
double reg_inc_beta(double x, double a, double b);

// Beta(a,b) quantile by bisection on reg_inc_beta to absolute 1e-9.
double beta_quantile(double p, double a, double b);

// Mean of a N(mu, sigma^2) draw clamped into [lo, hi] (exact formula).
double clamped_gaussian_mean(double mu, double sigma, double lo, double hi);

}  // namespace bandit
