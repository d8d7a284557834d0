// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wpcn/specfun.hpp"
#include "wpcn/system.hpp"

using namespace wpcn;

namespace {

// Independent oracles, kept free of the implementation paths they check.

// I0 via direct power-series summation in long double.
long double i0_series_oracle(long double t) {
  const long double q = 0.25L * t * t;
  long double term = 1.0L, sum = 1.0L;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * m);
    sum += term;
    if (term < 1e-25L * sum) break;
  }
  return sum;
}

long double i1_series_oracle(long double t) {
  const long double q = 0.25L * t * t;
  long double term = 0.5L * t, sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * (m + 1));
    sum += term;
    if (term < 1e-25L * sum) break;
  }
  return sum;
}

// log I0 for large t from the asymptotic series, long double.
long double log_i0_asymptotic_oracle(long double t) {
  long double term = 1.0L, sum = 1.0L, prev = 1e30L;
  for (int k = 1; k <= 40; ++k) {
    const long double d = 2.0L * k - 1.0L;
    term *= d * d / (8.0L * t * k);
    if (fabsl(term) >= prev) break;
    sum += term;
    prev = fabsl(term);
  }
  return t - 0.5L * logl(2.0L * static_cast<long double>(M_PI) * t) + logl(sum);
}

// Root of w + ln w = l by bisection.
double w_plus_logw_oracle(double l) {
  double lo = 1e-12, hi = l + 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid + std::log(mid) < l ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("lambert_w0 pinned values") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-13));
  const double mu = 1.85;
  CHECK(lambert_w0(mu * std::exp(mu)) == doctest::Approx(mu).epsilon(1e-13));
  CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(lambert_w0(-0.3678794412), std::domain_error);
}

TEST_CASE("lambert_w0 defining identity over the domain") {
  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    // Log-spread over [-1/e, 1e6] with mass near the branch point and zero.
    double x;
    const double u = rng.uniform();
    if (u < 0.25) {
      x = -std::exp(-1.0) + rng.uniform() * std::exp(-1.0);
    } else {
      x = std::exp(rng.uniform() * std::log(1e6) * 2.0 - std::log(1e6) * 0.5);
      if (x > 1e6) x = rng.uniform() * 1e6;
    }
    const double w = lambert_w0(x);
    CHECK(w >= -1.0);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-10 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("lambert_w0_of_exp matches the log-form equation") {
  CHECK(lambert_w0_of_exp({1.0}) == doctest::Approx(1.0).epsilon(1e-13));
  const double mu = 1.85;
  CHECK(lambert_w0_of_exp({std::log(mu) + mu}) == doctest::Approx(mu).epsilon(1e-13));

  const double w43 = lambert_w0_of_exp({43.0});
  CHECK(w43 == doctest::Approx(w_plus_logw_oracle(43.0)).epsilon(1e-12));
  CHECK(w43 == doctest::Approx(39.3).epsilon(2e-3));
  CHECK(std::abs(w43 + std::log(w43) - 43.0) <= 1e-12 * 43.0);

  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double l = 2.0 + rng.uniform() * 498.0;
    const double w = lambert_w0_of_exp({l});
    CHECK(std::abs(w + std::log(w) - l) <= 1e-10 * l);
  }
}

TEST_CASE("lambert_w0_of_exp consistent with direct evaluation when representable") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const double l = -5.0 + rng.uniform() * 15.0;  // exp(l) comfortably representable
    const double direct = lambert_w0(std::exp(l));
    CHECK(lambert_w0_of_exp({l}) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("bessel_i0 against power-series oracle") {
  CHECK(bessel_i0(0.0) == 1.0);
  CHECK(bessel_i0(1.0) == doctest::Approx(1.2660658777520083).epsilon(1e-13));
  for (double t : {0.1, 0.5, 2.0, 7.5, 15.0, 19.9, 20.1, 25.0, 44.0, 100.0}) {
    const double oracle = static_cast<double>(i0_series_oracle(t));
    CHECK(bessel_i0(t) == doctest::Approx(oracle).epsilon(1e-12));
  }
  CHECK_THROWS_AS(bessel_i0(-1.0), std::domain_error);
}

TEST_CASE("log_bessel_i0 across the series/asymptotic switch") {
  CHECK(log_bessel_i0(0.0).log_magnitude == 0.0);
  CHECK(log_bessel_i0(44.0).log_magnitude ==
        doctest::Approx(static_cast<double>(log_i0_asymptotic_oracle(44.0L))).epsilon(1e-12));
  CHECK(log_bessel_i0(44.0).log_magnitude == doctest::Approx(41.19).epsilon(1e-3));
  // Both branches agree with the series oracle around the switch point.
  for (double t : {19.99, 19.999999, 20.0, 20.000001, 20.01}) {
    const double oracle = static_cast<double>(logl(i0_series_oracle(t)));
    CHECK(log_bessel_i0(t).log_magnitude == doctest::Approx(oracle).epsilon(1e-12));
  }
  // Valid far beyond double overflow of I0 itself.
  const double big = log_bessel_i0(5000.0).log_magnitude;
  CHECK(big == doctest::Approx(static_cast<double>(log_i0_asymptotic_oracle(5000.0L))));
}

TEST_CASE("log_bessel_i0 monotone and convex") {
  const int n = 1000;
  double prev = 0.0, prev_diff = -1.0;
  bool first = true;
  for (int i = 0; i <= n; ++i) {
    const double t = 300.0 * i / n;
    const double v = log_bessel_i0(t).log_magnitude;
    if (!first) {
      const double diff = v - prev;
      CHECK(diff >= -1e-12);
      if (prev_diff >= 0.0) CHECK(diff - prev_diff >= -1e-9);
      prev_diff = diff;
    }
    prev = v;
    first = false;
  }
}

TEST_CASE("bessel_i1_over_i0 values and limits") {
  CHECK(bessel_i1_over_i0(0.0) == 0.0);
  CHECK(bessel_i1_over_i0(2.0) ==
        doctest::Approx(static_cast<double>(i1_series_oracle(2.0L) / i0_series_oracle(2.0L)))
            .epsilon(1e-12));
  CHECK(bessel_i1_over_i0(2.0) == doctest::Approx(0.69777).epsilon(1e-4));
  const double r100 = bessel_i1_over_i0(100.0);
  CHECK(r100 > 0.99);
  CHECK(r100 < 1.0);
  CHECK(r100 == doctest::Approx(1.0 - 1.0 / 200.0).epsilon(1e-4));
  CHECK_THROWS_AS(bessel_i1_over_i0(-0.5), std::domain_error);
}

TEST_CASE("bessel_i1_over_i0 monotone in [0,1)") {
  double prev = -1.0;
  for (int i = 0; i <= 500; ++i) {
    const double t = 0.01 + 250.0 * i / 500.0;
    const double r = bessel_i1_over_i0(t);
    CHECK(r > prev);
    CHECK(r < 1.0);
    prev = r;
  }
}

TEST_CASE("ratio equals derivative of log I0") {
  for (double t : {0.1, 0.5, 1.0, 5.0, 19.0, 21.0, 50.0, 200.0}) {
    const double h = 1e-6 * std::max(1.0, t);
    const double fd =
        (log_bessel_i0(t + h).log_magnitude - log_bessel_i0(t - h).log_magnitude) / (2.0 * h);
    CHECK(bessel_i1_over_i0(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}
