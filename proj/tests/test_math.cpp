#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bandit/math.hpp"
#include "bandit/rng.hpp"

using namespace bandit;

TEST_CASE("normal_cdf known values and symmetry") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-12));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  for (double x : {0.3, 1.7, 2.9}) {
    CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("normal_quantile inverts normal_cdf") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-6));
  for (double p : {0.01, 0.2, 0.5, 0.9, 0.999}) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
  }
  CHECK(std::isinf(normal_quantile(0.0)));
  CHECK(std::isinf(normal_quantile(1.0)));
  CHECK(normal_quantile(0.0) < 0.0);
  CHECK(normal_quantile(1.0) > 0.0);
  CHECK_THROWS_AS(normal_quantile(-0.1), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.1), std::domain_error);
}

TEST_CASE("reg_inc_beta matches closed forms") {
  for (double x : {0.0, 0.1, 0.4, 0.75, 1.0}) {
    CHECK(reg_inc_beta(x, 1.0, 1.0) == doctest::Approx(x).epsilon(1e-10));
    CHECK(reg_inc_beta(x, 2.0, 1.0) == doctest::Approx(x * x).epsilon(1e-10));
    CHECK(reg_inc_beta(x, 1.0, 2.0) ==
          doctest::Approx(1.0 - (1.0 - x) * (1.0 - x)).epsilon(1e-10));
  }
  // Symmetric case: I_{1/2}(a, a) = 1/2.
  CHECK(reg_inc_beta(0.5, 3.0, 3.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1.0), std::domain_error);
}

TEST_CASE("beta_quantile worked examples") {
  CHECK(beta_quantile(0.75, 2.0, 1.0) ==
        doctest::Approx(0.8660254037844386).epsilon(1e-7));
  CHECK(beta_quantile(0.9, 1.0, 1.0) == doctest::Approx(0.9).epsilon(1e-7));
  CHECK(beta_quantile(0.0, 2.0, 3.0) == doctest::Approx(0.0));
  CHECK(beta_quantile(1.0, 2.0, 3.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(beta_quantile(-0.5, 1.0, 1.0), std::domain_error);
}

TEST_CASE("beta_quantile round-trips through reg_inc_beta") {
  for (double p : {0.05, 0.3, 0.6, 0.95}) {
    for (double a : {0.5, 1.0, 4.0}) {
      for (double b : {0.5, 2.0, 7.0}) {
        double q = beta_quantile(p, a, b);
        CHECK(reg_inc_beta(q, a, b) == doctest::Approx(p).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("clamped_gaussian_mean degenerate cases") {
  CHECK(clamped_gaussian_mean(0.5, 0.0, 0.0, 1.0) == doctest::Approx(0.5));
  CHECK(clamped_gaussian_mean(2.0, 0.0, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(clamped_gaussian_mean(-3.0, 0.0, 0.0, 1.0) == doctest::Approx(0.0));
  // Bounds far away: clamping is a no-op.
  CHECK(clamped_gaussian_mean(0.5, 0.1, -100.0, 100.0) ==
        doctest::Approx(0.5).epsilon(1e-9));
  // Symmetric bounds around mu leave the mean untouched.
  CHECK(clamped_gaussian_mean(0.5, 0.7, 0.0, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("clamped_gaussian_mean agrees with Monte Carlo") {
  struct Case {
    double mu, sigma, lo, hi;
  };
  for (const Case& c : {Case{0.9, 0.4, 0.0, 1.0}, Case{0.1, 1.0, 0.0, 1.0},
                        Case{1.4, 0.25, 0.0, 1.0}}) {
    RngStream rng(31, 0);
    double sum = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
      double x = rng.gaussian(c.mu, c.sigma);
      sum += std::min(c.hi, std::max(c.lo, x));
    }
    double mc = sum / n;
    double exact = clamped_gaussian_mean(c.mu, c.sigma, c.lo, c.hi);
    CHECK(exact == doctest::Approx(mc).epsilon(0.01));
  }
}
