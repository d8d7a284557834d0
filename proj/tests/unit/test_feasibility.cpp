// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "wpcn/feasibility.hpp"

using namespace wpcn;

namespace {

SystemConfig base_cfg() {
  SystemConfig cfg;
  cfg.n_antennas = 4;
  return cfg;
}

// Brute-force feasibility: scan max_k f_k over a dense grid.
bool scan_feasible(const SystemConfig& cfg, const ChannelRealization& ch, int points = 100000) {
  const double cap = phi(cfg.eh.a_s_sq, cfg.eh);
  for (int i = 1; i < points; ++i) {
    const double tau = static_cast<double>(i) / points;
    const double worst = std::max(demand_f(tau, 0, cfg, ch.eff_noise_w[0]),
                                  demand_f(tau, 1, cfg, ch.eff_noise_w[1]));
    if (worst <= cap) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("demand curve pinned values") {
  SystemConfig cfg = base_cfg();
  cfg.r_req = {1.0, 1.0};
  cfg.q_init_j = {0.0, 0.0};
  // R=1, tau=0.5, sigma=1, q=0: ((0.5/0.5))(2^2 - 1) * 1 = 3.
  CHECK(demand_f(0.5, 0, cfg, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS(demand_f(0.0, 0, cfg, 1.0));
  CHECK_THROWS(demand_f(1.0, 0, cfg, 1.0));
}

TEST_CASE("demand curve asymptotics") {
  SystemConfig cfg = base_cfg();
  cfg.r_req = {2.0, 2.0};

  // q = 0: f -> +inf at both ends.
  cfg.q_init_j = {0.0, 0.0};
  CHECK(demand_f(1e-9, 0, cfg, 1e-10) > 1e3 * demand_f(0.5, 0, cfg, 1e-10));
  CHECK(demand_f(1.0 - 1e-9, 0, cfg, 1e-10) > 1e3 * demand_f(0.5, 0, cfg, 1e-10));

  // Large stored energy: f negative near zero.
  cfg.q_init_j = {1.0, 1.0};
  CHECK(demand_f(1e-6, 0, cfg, 1e-10) < 0.0);
}

TEST_CASE("demand derivative matches finite differences") {
  SystemConfig cfg = base_cfg();
  cfg.r_req = {1.7, 1.7};
  cfg.q_init_j = {2e-6, 2e-6};
  const double sigma = 3e-10;
  for (double tau : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    const double h = 1e-7;
    const double fd =
        (demand_f(tau + h, 0, cfg, sigma) - demand_f(tau - h, 0, cfg, sigma)) / (2.0 * h);
    CHECK(demand_f_prime(tau, 0, cfg, sigma) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("demand curve convex for q=0; monotone under the trivial condition") {
  SystemConfig cfg = base_cfg();
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    cfg.r_req = {0.5 + 3.0 * rng.uniform(), 0.5 + 3.0 * rng.uniform()};
    cfg.q_init_j = {0.0, 0.0};
    const double sigma = std::pow(10.0, -11.0 + 3.0 * rng.uniform());
    const int n = 10000;
    double prev = 0.0, prev_d = 0.0;
    for (int i = 1; i < n; ++i) {
      const double tau = static_cast<double>(i) / n;
      const double v = demand_f(tau, 0, cfg, sigma);
      if (!std::isfinite(v)) break;  // overflow plateau close to tau = 1
      if (i >= 2) {
        const double d = v - prev;
        if (i >= 3) CHECK(d - prev_d >= -1e-9 * std::max(1.0, std::abs(v)));
        prev_d = d;
      }
      prev = v;
    }
  }

  // Under condition (trivial), f is monotone increasing.
  cfg.r_req = {1.0, 1.0};
  const double sigma = 1e-10;
  cfg.q_init_j = {((std::exp2(1.0) - 1.0) * sigma) * 2.0, 0.0};  // q/Tf > (2^R - 1) sigma
  double prev = -1e300;
  for (int i = 1; i < 2000; ++i) {
    const double tau = static_cast<double>(i) / 2000;
    const double v = demand_f(tau, 0, cfg, sigma);
    CHECK(v - prev >= -1e-12);
    prev = v;
  }
}

TEST_CASE("trivial regime returns the minimum feasible uplink powers") {
  SystemConfig cfg = base_cfg();
  cfg.r_req = {0.8, 1.2};
  cfg.q_init_j = {1.0, 1.0};  // enormous stored energy
  const auto ch = sample_channel(cfg, 10);
  const auto verdict = check_feasibility(cfg, ch);
  REQUIRE(verdict.status == FeasibilityStatus::TrivialSolution);
  CHECK((*verdict.trivial_powers)[0] == (std::exp2(0.8) - 1.0) * ch.eff_noise_w[0]);
  CHECK((*verdict.trivial_powers)[1] == (std::exp2(1.2) - 1.0) * ch.eff_noise_w[1]);
}

TEST_CASE("impossible rates are infeasible") {
  SystemConfig cfg = base_cfg();
  cfg.r_req = {40.0, 40.0};  // far beyond the saturation ceiling
  cfg.q_init_j = {0.0, 0.0};
  const auto ch = sample_channel(cfg, 11);
  CHECK(check_feasibility(cfg, ch).status == FeasibilityStatus::Infeasible);
  CHECK(!scan_feasible(cfg, ch, 20000));
}

TEST_CASE("moderate rates are non-trivial with a valid interval") {
  SystemConfig cfg = base_cfg();
  cfg.r_req = {2.0, 2.0};
  cfg.q_init_j = {0.0, 0.0};
  const auto ch = sample_channel(cfg, 12);
  const auto verdict = check_feasibility(cfg, ch);
  REQUIRE(verdict.status == FeasibilityStatus::NonTrivial);
  const auto& iv = *verdict.interval;
  CHECK(iv.tau_min > 0.0);
  CHECK(iv.tau_min <= iv.tau_max);
  CHECK(iv.tau_max < 1.0);
  CHECK(scan_feasible(cfg, ch, 20000));

  const double cap = phi(cfg.eh.a_s_sq, cfg.eh);
  for (int k = 0; k < 2; ++k) {
    // tau_min_k solves f_k = phi(A_s^2).
    CHECK(demand_f(iv.tau_min_k[k], k, cfg, ch.eff_noise_w[k]) ==
          doctest::Approx(cap).epsilon(1e-8));
    // tau_max_k is the stationary point of f_k.
    CHECK(std::abs(demand_f_prime(iv.tau_max_k[k], k, cfg, ch.eff_noise_w[k])) <=
          1e-6 * std::abs(demand_f_prime(0.99, k, cfg, ch.eff_noise_w[k])));
    // f_k at its minimum stays positive in the non-trivial regime.
    CHECK(demand_f(iv.tau_max_k[k], k, cfg, ch.eff_noise_w[k]) > 0.0);
  }
}

TEST_CASE("symmetric users give symmetric intervals") {
  SystemConfig cfg = base_cfg();
  cfg.n_antennas = 2;
  cfg.r_req = {1.5, 1.5};
  ChannelRealization ch;
  ch.h = Eigen::MatrixXcd::Identity(2, 2) * std::sqrt(path_loss(cfg, 0));
  zf_process(ch, cfg.noise_w);
  const auto iv = compute_interval(cfg, ch);
  CHECK(iv.tau_min_k[0] == doctest::Approx(iv.tau_min_k[1]).epsilon(1e-12));
  CHECK(iv.tau_max_k[0] == doctest::Approx(iv.tau_max_k[1]).epsilon(1e-12));
}

TEST_CASE("stationarity equation residual") {
  // At tau_max_k: 2^(R/(1-t)) ln2 R sigma = f(t) + q/Tf.
  SystemConfig cfg = base_cfg();
  cfg.r_req = {1.3, 2.6};
  cfg.q_init_j = {0.0, 5e-7};
  const auto ch = sample_channel(cfg, 14);
  const auto verdict = check_feasibility(cfg, ch);
  REQUIRE(verdict.status == FeasibilityStatus::NonTrivial);
  for (int k = 0; k < 2; ++k) {
    const double t = verdict.interval->tau_max_k[k];
    if (t == 0.0) continue;  // monotone curve, no stationary point
    const double sigma = ch.eff_noise_w[k];
    const double lhs = std::exp2(cfg.r_req[k] / (1.0 - t)) * M_LN2 * cfg.r_req[k] * sigma;
    const double rhs =
        demand_f(t, k, cfg, sigma) + cfg.q_init_j[k] / cfg.t_frame_s;
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
  }
}

TEST_CASE("dense-grid argmin matches tau_max_k") {
  SystemConfig cfg = base_cfg();
  cfg.r_req = {2.2, 2.2};
  const auto ch = sample_channel(cfg, 15);
  const auto iv = compute_interval(cfg, ch);
  const int n = 1000000;
  double best = 1e300;
  int besti = 0;
  for (int i = 1; i < n; ++i) {
    const double tau = static_cast<double>(i) / n;
    const double v = demand_f(tau, 0, cfg, ch.eff_noise_w[0]);
    if (v < best) {
      best = v;
      besti = i;
    }
  }
  CHECK(std::abs(static_cast<double>(besti) / n - iv.tau_max_k[0]) <= 2.0 / n);
}

TEST_CASE("verdicts agree with brute-force scan on random instances") {
  Rng rng(77);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    SystemConfig cfg = base_cfg();
    cfg.n_antennas = 2 + static_cast<int>(rng.uniform() * 6.0);
    cfg.r_req = {0.5 + 12.0 * rng.uniform(), 0.5 + 12.0 * rng.uniform()};
    cfg.q_init_j = {rng.uniform() < 0.3 ? 1e-9 * rng.uniform() : 0.0,
                    rng.uniform() < 0.3 ? 1e-9 * rng.uniform() : 0.0};
    const auto ch = sample_channel(cfg, 3000 + static_cast<std::uint64_t>(trial));

    // Skip knife-edge instances where a finite grid cannot decide.
    const double cap = phi(cfg.eh.a_s_sq, cfg.eh);
    double fmin = 1e300;
    for (int i = 1; i < 3000; ++i) {
      const double tau = static_cast<double>(i) / 3000;
      fmin = std::min(fmin, std::max(demand_f(tau, 0, cfg, ch.eff_noise_w[0]),
                                     demand_f(tau, 1, cfg, ch.eff_noise_w[1])));
    }
    if (std::abs(fmin - cap) < 1e-3 * cap) continue;

    const auto verdict = check_feasibility(cfg, ch);
    const bool feasible = verdict.status != FeasibilityStatus::Infeasible;
    CHECK(feasible == scan_feasible(cfg, ch));
    ++checked;
  }
  CHECK(checked > 150);
}
