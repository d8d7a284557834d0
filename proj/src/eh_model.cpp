// SPDX-License-Identifier: Apache-2.0

#include "wpcn/eh_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "wpcn/specfun.hpp"

namespace wpcn {

void EhCircuitParams::validate() const {
  if (!(lambda > 0.0 && mu > 0.0 && nu > 0.0 && a_s_sq > 0.0)) {
    throw std::invalid_argument("EhCircuitParams: all parameters must be positive");
  }
}

namespace {

// Unclamped law evaluated through the log domain: the Lambert-W argument
// mu e^mu I0(nu sqrt(2x)) reaches ~e^44 at the reference parameters.
double phi_unclamped(double x, const EhCircuitParams& p) {
  if (x == 0.0) return 0.0;
  const double t = p.nu * std::sqrt(2.0 * x);
  const LogDomainValue l{std::log(p.mu) + p.mu + log_bessel_i0(t).log_magnitude};
  const double w = lambert_w0_of_exp(l);
  const double d = w / p.mu - 1.0;
  return p.lambda * d * d;
}

}  // namespace

double phi(double x, const EhCircuitParams& p) {
  if (!(x >= 0.0)) throw std::domain_error("phi: negative received power");
  return phi_unclamped(std::min(x, p.a_s_sq), p);
}

double phi_prime(double x, const EhCircuitParams& p) {
  if (!(x > 0.0) || !(x < p.a_s_sq)) {
    throw std::domain_error("phi_prime: argument outside (0, a_s_sq)");
  }
  const double t = p.nu * std::sqrt(2.0 * x);
  const LogDomainValue l{std::log(p.mu) + p.mu + log_bessel_i0(t).log_magnitude};
  const double w = lambert_w0_of_exp(l);
  // dphi/dx = 2 lambda (w/mu - 1) (1/mu) w/(1+w) * (I1/I0)(t) * nu/sqrt(2x),
  // with (I1/I0)(t) * nu/sqrt(2x) = nu^2 * (I1/I0)(t)/t kept stable near 0.
  const double r = bessel_i1_over_i0_over_t(t);
  return 2.0 * p.lambda * (w / p.mu - 1.0) / p.mu * w / (1.0 + w) * p.nu * p.nu * r;
}

double phi_inverse(double rho, const EhCircuitParams& p) {
  const double cap = phi(p.a_s_sq, p);
  if (!(rho >= 0.0)) throw std::domain_error("phi_inverse: negative target");
  if (rho > cap * (1.0 + 1e-12)) {
    throw std::range_error("phi_inverse: target exceeds saturation ceiling");
  }
  if (rho == 0.0) return 0.0;
  if (rho >= cap) return p.a_s_sq;
  double lo = 0.0, hi = p.a_s_sq;
  for (int i = 0; i < 200 && (hi - lo) > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (phi_unclamped(mid, p) < rho ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double sigmoid_eval(double x, const SigmoidEhParams& s) {
  const double omega = 1.0 / (1.0 + std::exp(s.a * s.b));
  const double logistic = 1.0 / (1.0 + std::exp(-s.a * (x - s.b)));
  return s.m_sat * (logistic - omega) / (1.0 - omega);
}

double sigmoid_inverse(double rho, const SigmoidEhParams& s) {
  if (!(rho >= 0.0)) throw std::domain_error("sigmoid_inverse: negative target");
  if (rho >= s.m_sat) throw std::range_error("sigmoid_inverse: target at/above m_sat");
  const double omega = 1.0 / (1.0 + std::exp(s.a * s.b));
  const double logistic = rho / s.m_sat * (1.0 - omega) + omega;
  return s.b + std::log(logistic / (1.0 - logistic)) / s.a;
}

namespace {

double sigmoid_rms_on(const std::vector<double>& xs, const std::vector<double>& ys,
                      const SigmoidEhParams& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = sigmoid_eval(xs[i], s) - ys[i];
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

}  // namespace

SurrogateFit fit_surrogates(const EhCircuitParams& p, std::size_t grid_size) {
  if (grid_size < 16) throw std::invalid_argument("fit_surrogates: grid_size < 16");
  const double cap = phi(p.a_s_sq, p);

  std::vector<double> xs(grid_size), ys(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    xs[i] = p.a_s_sq * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    ys[i] = phi(xs[i], p);
  }

  // Linear law: closed-form least squares through the origin, clamped to (0, 1].
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    sxy += xs[i] * ys[i];
    sxx += xs[i] * xs[i];
  }
  LinearEhParams lin{std::clamp(sxy / sxx, 1e-12, 1.0)};
  double lin_rms = 0.0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double r = lin.eta * xs[i] - ys[i];
    lin_rms += r * r;
  }
  lin_rms = std::sqrt(lin_rms / static_cast<double>(grid_size));

  // Sigmoid: m_sat pinned to phi(a_s_sq); 2-parameter fit of (a, b) by a
  // coarse log/linear grid followed by damped Gauss-Newton refinement.
  SigmoidEhParams best{cap, 10.0 / p.a_s_sq, p.a_s_sq};
  double best_rms = sigmoid_rms_on(xs, ys, best);
  for (int ia = 0; ia < 48; ++ia) {
    const double a = std::exp(std::log(0.5 / p.a_s_sq) +
                              (std::log(300.0 / p.a_s_sq) - std::log(0.5 / p.a_s_sq)) * ia / 47.0);
    for (int ib = 0; ib < 48; ++ib) {
      const double b = p.a_s_sq * (0.05 + 3.0 * ib / 47.0);
      const SigmoidEhParams cand{cap, a, b};
      const double rms = sigmoid_rms_on(xs, ys, cand);
      if (rms < best_rms) {
        best_rms = rms;
        best = cand;
      }
    }
  }
  // Gauss-Newton with numeric Jacobian and multiplicative damping.
  double damp = 1e-4;
  for (int it = 0; it < 120; ++it) {
    const double da = best.a * 1e-6, db = best.b * 1e-6;
    double jtj[2][2] = {{0, 0}, {0, 0}};
    double jtr[2] = {0, 0};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r0 = sigmoid_eval(xs[i], best) - ys[i];
      const double ja = (sigmoid_eval(xs[i], {best.m_sat, best.a + da, best.b}) - ys[i] - r0) / da;
      const double jb = (sigmoid_eval(xs[i], {best.m_sat, best.a, best.b + db}) - ys[i] - r0) / db;
      jtj[0][0] += ja * ja;
      jtj[0][1] += ja * jb;
      jtj[1][1] += jb * jb;
      jtr[0] += ja * r0;
      jtr[1] += jb * r0;
    }
    jtj[1][0] = jtj[0][1];
    const double d0 = jtj[0][0] * (1.0 + damp), d1 = jtj[1][1] * (1.0 + damp);
    const double det = d0 * d1 - jtj[0][1] * jtj[1][0];
    if (std::abs(det) < 1e-300) break;
    const double sa = (d1 * jtr[0] - jtj[0][1] * jtr[1]) / det;
    const double sb = (d0 * jtr[1] - jtj[1][0] * jtr[0]) / det;
    SigmoidEhParams cand{best.m_sat, best.a - sa, best.b - sb};
    if (!(cand.a > 0.0) || !(cand.b > 0.0)) {
      damp *= 10.0;
      continue;
    }
    const double rms = sigmoid_rms_on(xs, ys, cand);
    if (rms < best_rms) {
      best = cand;
      best_rms = rms;
      damp = std::max(damp * 0.3, 1e-9);
    } else {
      damp *= 10.0;
      if (damp > 1e8) break;
    }
  }

  return {best, lin, best_rms, lin_rms};
}

}  // namespace wpcn
