// SPDX-License-Identifier: Apache-2.0

#include "wpcn/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpcn {

namespace {

constexpr double kInvE = 0.36787944117144232;  // 1/e
constexpr double kBranchTol = 1e-12;

// Series/asymptotic crossover for I0 and I1. Both expansions deliver
// <= 1e-12 relative error at this point.
constexpr double kBesselSwitch = 20.0;

double lambert_w0_initial_guess(double x) {
  if (x < -0.3) {
    // Branch-point expansion in p = sqrt(2(1 + e*x)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (1.0 + std::exp(1.0) * x)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
  }
  if (x < 1.0) {
    // Pade-ish series around 0.
    return x * (1.0 + x * (-1.0 + x * (1.5 - 8.0 / 3.0 * x)));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  if (!(x >= -kInvE - kBranchTol)) {
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x <= -kInvE) return -1.0;
  if (x == 0.0) return 0.0;

  double w = lambert_w0_initial_guess(x);
  if (w <= -1.0) w = -1.0 + 1e-12;
  // Halley iteration on f(w) = w e^w - x.
  for (int i = 0; i < 40; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double fp = ew * (1.0 + w);
    const double step = f / (fp - f * (2.0 + w) / (2.0 * (1.0 + w)));
    w -= step;
    if (std::abs(step) <= 2e-16 * std::max(0.1, std::abs(w))) break;
  }
  return w;
}

double lambert_w0_of_exp(LogDomainValue l) {
  const double v = l.log_magnitude;
  if (!(std::isfinite(v))) {
    throw std::domain_error("lambert_w0_of_exp: non-finite argument");
  }
  if (v <= 1.0) return lambert_w0(std::exp(v));

  // Solve g(w) = w + ln w - l = 0 for w > 0. g is concave and Newton
  // from w0 with g(w0) < 0 converges monotonically from below.
  double w = v - std::log(v);
  for (int i = 0; i < 40; ++i) {
    const double g = w + std::log(w) - v;
    const double step = g * w / (w + 1.0);
    w -= step;
    if (std::abs(step) <= 1e-16 * w) break;
  }
  return w;
}

namespace {

// Power series I0(t) = sum_m (t/2)^(2m) / (m!)^2, t < kBesselSwitch.
double bessel_i0_series(double t) {
  const double q = 0.25 * t * t;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 80; ++m) {
    term *= q / (static_cast<double>(m) * m);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// I1(t) = sum_m (t/2)^(2m+1) / (m! (m+1)!)
double bessel_i1_series(double t) {
  const double q = 0.25 * t * t;
  double term = 0.5 * t, sum = term;
  for (int m = 1; m < 80; ++m) {
    term *= q / (static_cast<double>(m) * (m + 1));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// Asymptotic correction sum for I_nu(t) ~ e^t/sqrt(2 pi t) * corr.
// Term recurrence: c_k = c_{k-1} * ((2k-1)^2 - 4 nu^2) / (8 t k).
double bessel_asymptotic_corr(double t, double mu4) {
  double term = 1.0, sum = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k <= 40; ++k) {
    const double d = 2.0 * k - 1.0;
    term *= (d * d - mu4) / (8.0 * t * k);
    if (std::abs(term) >= prev) break;  // asymptotic tail: stop at smallest term
    sum += term;
    prev = std::abs(term);
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

double bessel_i0(double t) {
  if (!(t >= 0.0)) throw std::domain_error("bessel_i0: negative argument");
  if (t < kBesselSwitch) return bessel_i0_series(t);
  const double corr = bessel_asymptotic_corr(t, 0.0);
  return std::exp(t) / std::sqrt(2.0 * M_PI * t) * corr;
}

LogDomainValue log_bessel_i0(double t) {
  if (!(t >= 0.0)) throw std::domain_error("log_bessel_i0: negative argument");
  if (t < kBesselSwitch) return {std::log(bessel_i0_series(t))};
  const double corr = bessel_asymptotic_corr(t, 0.0);
  return {t - 0.5 * std::log(2.0 * M_PI * t) + std::log(corr)};
}

double bessel_i1_over_i0(double t) {
  if (!(t >= 0.0)) throw std::domain_error("bessel_i1_over_i0: negative argument");
  if (t == 0.0) return 0.0;
  if (t < kBesselSwitch) return bessel_i1_series(t) / bessel_i0_series(t);
  return bessel_asymptotic_corr(t, 4.0) / bessel_asymptotic_corr(t, 0.0);
}

double bessel_i1_over_i0_over_t(double t) {
  if (!(t >= 0.0)) throw std::domain_error("bessel_i1_over_i0_over_t: negative argument");
  if (t < 1e-4) {
    // I1/I0 = t/2 - t^3/16 + O(t^5)
    return 0.5 - t * t / 16.0;
  }
  return bessel_i1_over_i0(t) / t;
}

}  // namespace wpcn
