// SPDX-License-Identifier: Apache-2.0

#include "wpcn/feasibility.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpcn {

namespace {

constexpr double kTauEps = 1e-12;

double pow2_guarded(double e) {
  if (e > 1020.0) return std::numeric_limits<double>::infinity();
  return std::exp2(e);
}

struct UserCurve {
  double r_req;
  double sigma;   // sigma_tilde_k^2
  double q_over_tf;

  double f(double t) const {
    const double growth = pow2_guarded(r_req / (1.0 - t)) - 1.0;
    return (1.0 - t) / t * growth * sigma - q_over_tf / t;
  }

  // f'(t) = [2^(R/(1-t)) (ln2 R t/(1-t) - 1) sigma + sigma + q/Tf] / t^2
  double fprime(double t) const {
    const double e = pow2_guarded(r_req / (1.0 - t));
    const double num = e * (M_LN2 * r_req * t / (1.0 - t) - 1.0) * sigma + sigma + q_over_tf;
    return num / (t * t);
  }

  // (2^R - 1) sigma - q/Tf; negative iff the trivial condition holds.
  double g_at_zero() const { return (pow2_guarded(r_req) - 1.0) * sigma - q_over_tf; }
};

UserCurve curve_for(const SystemConfig& cfg, const ChannelRealization& ch, int k) {
  const auto ku = static_cast<std::size_t>(k);
  return {cfg.r_req[ku], ch.eff_noise_w[ku], cfg.q_init_j[ku] / cfg.t_frame_s};
}

double bisect(double lo, double hi, double flo, const auto& fn) {
  // Root of fn on [lo, hi]; fn(lo) has sign of flo, opposite at hi.
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((fn(mid) < 0.0) == (flo < 0.0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct UserWindow {
  double lo = 0.0;        // smaller root of f = cap (0 if none binds)
  double hi = 1.0;        // larger root of f = cap
  double stationary = 0.0;  // interior minimizer (0 when f is monotone)
  bool never_satisfiable = false;
  bool trivial_condition = false;  // g(0) < 0
};

UserWindow user_window(const UserCurve& c, double cap) {
  UserWindow w;
  if (c.r_req == 0.0) {
    // No uplink demand: f <= 0 everywhere.
    w.trivial_condition = c.q_over_tf > 0.0;
    return w;
  }
  const double g0 = c.g_at_zero();
  if (g0 < 0.0) {
    // f increases from -inf; a single upper root bounds the window.
    w.trivial_condition = true;
    if (c.f(1.0 - kTauEps) > cap) {
      w.hi = bisect(kTauEps, 1.0 - kTauEps, -1.0, [&](double t) { return c.f(t) - cap; });
    }
    return w;
  }
  // Convex with f -> +inf at both ends: bracket the minimizer via f'.
  w.stationary = bisect(kTauEps, 1.0 - kTauEps, -1.0, [&](double t) { return c.fprime(t); });
  const double fmin = c.f(w.stationary);
  if (fmin > cap) {
    w.never_satisfiable = true;
    return w;
  }
  w.lo = bisect(kTauEps, w.stationary, 1.0, [&](double t) { return c.f(t) - cap; });
  if (c.f(1.0 - kTauEps) > cap) {
    w.hi = bisect(w.stationary, 1.0 - kTauEps, -1.0, [&](double t) { return c.f(t) - cap; });
  }
  return w;
}

}  // namespace

double demand_f(double tau_bar, int user, const SystemConfig& cfg, double eff_noise) {
  if (!(tau_bar > 0.0 && tau_bar < 1.0)) {
    throw std::domain_error("demand_f: tau_bar must lie in (0, 1)");
  }
  const auto ku = static_cast<std::size_t>(user);
  return UserCurve{cfg.r_req[ku], eff_noise, cfg.q_init_j[ku] / cfg.t_frame_s}.f(tau_bar);
}

double demand_f_prime(double tau_bar, int user, const SystemConfig& cfg, double eff_noise) {
  if (!(tau_bar > 0.0 && tau_bar < 1.0)) {
    throw std::domain_error("demand_f_prime: tau_bar must lie in (0, 1)");
  }
  const auto ku = static_cast<std::size_t>(user);
  return UserCurve{cfg.r_req[ku], eff_noise, cfg.q_init_j[ku] / cfg.t_frame_s}.fprime(tau_bar);
}

FeasibilityVerdict check_feasibility(const SystemConfig& cfg, const ChannelRealization& ch) {
  const double cap = phi(cfg.eh.a_s_sq, cfg.eh);
  const UserCurve c0 = curve_for(cfg, ch, 0), c1 = curve_for(cfg, ch, 1);
  const UserWindow w0 = user_window(c0, cap), w1 = user_window(c1, cap);

  if (w0.never_satisfiable || w1.never_satisfiable ||
      std::max(w0.lo, w1.lo) > std::min(w0.hi, w1.hi)) {
    return {FeasibilityStatus::Infeasible, std::nullopt, std::nullopt};
  }

  // Proposition 2: stored energy alone covers the uplink for both users.
  // A user with zero rate demand and zero stored energy needs nothing and
  // counts as covered even though the strict inequality degenerates.
  auto covered = [&](const UserCurve& c, int k) {
    const auto ku = static_cast<std::size_t>(k);
    if (cfg.r_req[ku] == 0.0) return cfg.q_init_j[ku] >= 0.0;
    return c.g_at_zero() < 0.0;
  };
  if (covered(c0, 0) && covered(c1, 1)) {
    std::array<double, 2> pu = {(std::exp2(cfg.r_req[0]) - 1.0) * ch.eff_noise_w[0],
                                (std::exp2(cfg.r_req[1]) - 1.0) * ch.eff_noise_w[1]};
    return {FeasibilityStatus::TrivialSolution, std::nullopt, pu};
  }

  TauInterval iv;
  iv.tau_min_k = {w0.lo, w1.lo};
  iv.tau_max_k = {w0.stationary, w1.stationary};
  iv.tau_min = std::max(w0.lo, w1.lo);
  iv.tau_max = std::max(w0.stationary, w1.stationary);
  iv.feasible_hi = std::min(w0.hi, w1.hi);
  return {FeasibilityStatus::NonTrivial, iv, std::nullopt};
}

TauInterval compute_interval(const SystemConfig& cfg, const ChannelRealization& ch) {
  const auto verdict = check_feasibility(cfg, ch);
  if (verdict.status != FeasibilityStatus::NonTrivial) {
    throw std::logic_error("compute_interval: verdict is not NonTrivial");
  }
  return *verdict.interval;
}

}  // namespace wpcn
