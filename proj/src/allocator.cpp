// SPDX-License-Identifier: Apache-2.0

#include "wpcn/allocator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wpcn {

namespace {

constexpr double kInteriorMargin = 1.0 - 1e-12;  // keep tangent points below A_s^2

double received(const Eigen::MatrixXcd& w_block, const Eigen::VectorXcd& h) {
  return (h.adjoint() * w_block * h).real()(0, 0);
}

// Tangent of the harvest law at x0, clamped strictly inside saturation.
struct Tangent {
  double slope;      // phi'(x0)
  double intercept;  // phi(x0) - phi'(x0) x0, the hat-psi term
};

Tangent tangent_at(double x0, const EhCircuitParams& eh) {
  const double hi = eh.a_s_sq * kInteriorMargin;
  const double x = std::clamp(x0, 0.0, hi);
  if (x <= 0.0) return {0.0, 0.0};  // phi(0) = 0, phi'(0+) = 0
  const double slope = phi_prime(x, eh);
  return {slope, phi(x, eh) - slope * x};
}

}  // namespace

conic::SdpSubproblem build_subproblem(double tau_bar, const ChannelRealization& ch,
                                      const SystemConfig& cfg, const LinearizationPoint& lp) {
  const int nt = cfg.n_antennas;
  const double a2 = cfg.eh.a_s_sq;
  const double cap = phi(a2, cfg.eh);

  for (int n = 0; n < kNumSlots; ++n) {
    if (!(lp.betas[static_cast<std::size_t>(n)] > 0.0)) {
      throw std::invalid_argument("build_subproblem: linearization beta not positive");
    }
    for (int k = 0; k < 2; ++k) {
      if (received(lp.w_blocks[static_cast<std::size_t>(n)], ch.user(k)) > a2 * (1.0 + 1e-9)) {
        throw std::invalid_argument("build_subproblem: saturated linearization point");
      }
    }
  }

  // Power normalization: beams in units of p0 (power that saturates the
  // strongest user), received powers in units of A_s^2, harvested and
  // uplink powers in units of phi(A_s^2).
  const double hmax2 = std::max(ch.user(0).squaredNorm(), ch.user(1).squaredNorm());
  const double p0 = a2 / hmax2;

  conic::SdpSubproblem sp;
  sp.psd_block_dims = {nt, nt, nt};
  sp.n_scalars = kNumSlots + 2;  // beta_1..3, p_u1, p_u2
  sp.objective_blocks.resize(kNumSlots);
  for (int n = 0; n < kNumSlots; ++n) {
    sp.objective_blocks[static_cast<std::size_t>(n)] =
        tau_bar * Eigen::MatrixXcd::Identity(nt, nt);
  }
  sp.objective_scalars = Eigen::VectorXd::Zero(sp.n_scalars);

  const double ttbar = tau_bar / (1.0 - tau_bar);
  std::array<Eigen::MatrixXcd, 2> hk_outer;
  for (int k = 0; k < 2; ++k) {
    hk_outer[static_cast<std::size_t>(k)] = ch.user(k) * ch.user(k).adjoint();
  }

  for (int k = 0; k < 2; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    // Rate: p_u_k >= (2^(R_k/(1-tau)) - 1) sigma_k^2.
    {
      conic::ConstraintRow row;
      row.scalar_coeffs = Eigen::VectorXd::Zero(sp.n_scalars);
      row.scalar_coeffs(kNumSlots + k) = 1.0;
      const double gamma = cfg.r_req[ku] / (1.0 - tau_bar);
      row.rhs = (std::exp2(gamma) - 1.0) * ch.eff_noise_w[ku] / cap;
      row.sense = conic::Sense::GreaterEqual;
      row.label = "rate_" + std::to_string(k);
      sp.constraints.push_back(std::move(row));
    }
    // Energy, linearized: p_u_k - tau/(1-tau) sum_n [phi'(x0) Tr(H_k V_n)
    // + beta_n (phi(x0) - phi'(x0) x0)] <= q_k / ((1-tau) T_f).
    {
      conic::ConstraintRow row;
      row.block_coeffs.resize(kNumSlots);
      row.scalar_coeffs = Eigen::VectorXd::Zero(sp.n_scalars);
      row.scalar_coeffs(kNumSlots + k) = 1.0;
      for (int n = 0; n < kNumSlots; ++n) {
        const auto nu2 = static_cast<std::size_t>(n);
        const double x0 = received(lp.w_blocks[nu2], ch.user(k));
        const Tangent tg = tangent_at(x0, cfg.eh);
        row.block_coeffs[nu2] = (-ttbar * tg.slope * p0 / cap) * hk_outer[ku];
        row.scalar_coeffs(n) = -ttbar * tg.intercept / cap;
      }
      row.rhs = cfg.q_init_j[ku] / ((1.0 - tau_bar) * cfg.t_frame_s * cap);
      row.sense = conic::Sense::LessEqual;
      row.label = "energy_" + std::to_string(k);
      sp.constraints.push_back(std::move(row));
    }
  }

  // Saturation rows Tr(H_k V_n) - beta_n A_s^2 <= 0, per slot and user.
  for (int n = 0; n < kNumSlots; ++n) {
    for (int k = 0; k < 2; ++k) {
      conic::ConstraintRow row;
      row.block_coeffs.resize(kNumSlots);
      row.block_coeffs[static_cast<std::size_t>(n)] =
          (p0 / a2) * hk_outer[static_cast<std::size_t>(k)];
      row.scalar_coeffs = Eigen::VectorXd::Zero(sp.n_scalars);
      row.scalar_coeffs(n) = -1.0;
      row.rhs = 0.0;
      row.sense = conic::Sense::LessEqual;
      row.label = "sat_" + std::to_string(n) + "_" + std::to_string(k);
      sp.constraints.push_back(std::move(row));
    }
  }

  // Slot simplex: sum_n beta_n = 1.
  {
    conic::ConstraintRow row;
    row.scalar_coeffs = Eigen::VectorXd::Zero(sp.n_scalars);
    for (int n = 0; n < kNumSlots; ++n) row.scalar_coeffs(n) = 1.0;
    row.rhs = 1.0;
    row.sense = conic::Sense::Equal;
    row.label = "simplex";
    sp.constraints.push_back(std::move(row));
  }

  return sp;
}

LinearizationPoint default_init(double tau_bar, const ChannelRealization& ch,
                                const SystemConfig& cfg,
                                std::optional<std::uint64_t> perturb_seed) {
  (void)tau_bar;
  const int nt = cfg.n_antennas;
  std::array<Eigen::VectorXcd, kNumSlots> dirs;
  dirs[0] = ch.user(0).normalized();
  dirs[1] = ch.user(1).normalized();
  Eigen::VectorXcd sum = dirs[0] + dirs[1];
  dirs[2] = sum.norm() > 1e-8 ? Eigen::VectorXcd(sum.normalized()) : dirs[0];

  if (perturb_seed) {
    Rng rng(*perturb_seed);
    for (auto& d : dirs) {
      Eigen::VectorXcd noise(nt);
      for (int j = 0; j < nt; ++j) {
        noise(j) = std::complex<double>(rng.gaussian(), rng.gaussian());
      }
      d = (d + 0.05 * noise.normalized()).normalized();
    }
  }

  LinearizationPoint lp;
  for (int n = 0; n < kNumSlots; ++n) {
    const auto nu = static_cast<std::size_t>(n);
    Eigen::MatrixXcd outer = dirs[nu] * dirs[nu].adjoint();
    const double reach = std::max(received(outer, ch.user(0)), received(outer, ch.user(1)));
    lp.w_blocks[nu] = (0.9 * cfg.eh.a_s_sq / reach) * outer;
    lp.betas[nu] = 1.0 / kNumSlots;
  }
  return lp;
}

namespace {

// Dominant eigenpair of a Hermitian PSD matrix; returns (lambda1, lambda2, u1).
struct EigenTop {
  double l1 = 0.0, l2 = 0.0;
  Eigen::VectorXcd u1;
};

EigenTop top_eigen(const Eigen::MatrixXcd& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w);
  const auto& evals = es.eigenvalues();
  const Eigen::Index n = evals.size();
  EigenTop out;
  out.l1 = evals(n - 1);
  out.l2 = n > 1 ? std::max(0.0, evals(n - 2)) : 0.0;
  out.u1 = es.eigenvectors().col(n - 1);
  // Deterministic phase: largest-magnitude entry real positive.
  Eigen::Index imax = 0;
  out.u1.cwiseAbs().maxCoeff(&imax);
  const std::complex<double> ph = out.u1(imax) / std::abs(out.u1(imax));
  out.u1 /= ph;
  return out;
}

}  // namespace

FixedTauResult solve_fixed_tau(double tau_bar, const ChannelRealization& ch,
                               const SystemConfig& cfg, const LinearizationPoint& init,
                               double eps_sca) {
  constexpr int kMaxScaIterations = 200;
  const double a2 = cfg.eh.a_s_sq;
  const double hmax2 = std::max(ch.user(0).squaredNorm(), ch.user(1).squaredNorm());
  const double p0 = a2 / hmax2;
  const double cap = phi(a2, cfg.eh);

  FixedTauResult out;
  LinearizationPoint lp = init;
  conic::SdpSolution sol;
  double prev_obj = std::numeric_limits<double>::infinity();
  ResourceAllocation::Diagnostics diag;

  for (int it = 0; it < kMaxScaIterations; ++it) {
    const auto sp = build_subproblem(tau_bar, ch, cfg, lp);
    sol = conic::solve(sp);
    if (sol.status != conic::SolveStatus::Optimal) {
      out.status = FixedTauStatus::SolverFailed;
      out.solver_status = sol.status;
      return out;
    }
    const double obj = sol.objective_value * p0;  // back to watts
    diag.objective_history.push_back(obj);
    diag.sca_iterations = it + 1;

    // Update tangent points W_n = V_n / beta_n; a slot whose fraction fell
    // below the floor keeps its previous point. Refreshing at the current
    // point keeps the previous solution feasible for the next subproblem,
    // which is what makes the objective sequence non-increasing.
    for (int n = 0; n < kNumSlots; ++n) {
      const auto nu = static_cast<std::size_t>(n);
      const double beta = sol.scalars(n);
      if (beta < kBetaFloor) continue;
      Eigen::MatrixXcd w = (p0 / beta) * sol.v_blocks[nu];
      // Solver tolerance can leave the received power epsilon above the
      // saturation level; project back inside.
      const double reach = std::max(received(w, ch.user(0)), received(w, ch.user(1)));
      if (reach > a2 * kInteriorMargin) {
        w *= a2 * kInteriorMargin / reach;
      }
      lp.w_blocks[nu] = std::move(w);
      lp.betas[nu] = std::max(beta, kBetaFloor);
    }

    if (it > 0 && std::abs(prev_obj - obj) <= eps_sca * std::max(1e-30, std::abs(prev_obj))) {
      break;
    }
    prev_obj = obj;
  }

  // Extract rank-1 beams from the converged blocks.
  ResourceAllocation alloc;
  alloc.tau_bar = tau_bar;
  alloc.diagnostics = std::move(diag);
  std::array<EigenTop, kNumSlots> tops;
  double max_slot_power = 0.0;
  for (int n = 0; n < kNumSlots; ++n) {
    const auto nu = static_cast<std::size_t>(n);
    tops[nu] = top_eigen(p0 * sol.v_blocks[nu]);  // eigenpair of V_n in watts
    max_slot_power = std::max(max_slot_power, tops[nu].l1);
  }
  for (int n = 0; n < kNumSlots; ++n) {
    const auto nu = static_cast<std::size_t>(n);
    const double beta = sol.scalars(n);
    if (beta <= kActiveSlotBeta) continue;
    const EigenTop& top = tops[nu];
    if (top.l1 <= 1e-5 * max_slot_power) {
      // Idle slot: solver-noise-level power. The time fraction is real
      // (the downlink transmits nothing for it) and is kept so the slot
      // fractions still sum to one.
      alloc.slots.push_back({beta, Eigen::VectorXcd::Zero(cfg.n_antennas)});
      continue;
    }
    const double ratio = top.l2 / top.l1;
    alloc.diagnostics.rank_ratios.push_back(ratio);
    if (ratio > 1e-4) {
      out.status = FixedTauStatus::RankViolation;
      out.solver_status = sol.status;
      return out;
    }
    // w_n = sqrt(lambda_1(V_n)/beta_n) u_1 so that beta_n ||w_n||^2 = Tr(V_n).
    alloc.slots.push_back({beta, std::sqrt(top.l1 / beta) * top.u1});
  }
  alloc.p_u = {sol.scalars(kNumSlots) * cap, sol.scalars(kNumSlots + 1) * cap};

  // Rank-1 extraction sheds the trailing-eigenvalue mass, which can leave
  // the energy constraint short by the extraction error. Restore it with
  // the smallest uniform beam rescale under the exact harvest law.
  auto energy_margin = [&](double kappa) {
    std::vector<BeamSlot> scaled = alloc.slots;
    for (auto& slot : scaled) slot.w *= std::sqrt(kappa);
    const EnergyState es = energy_state(ch, scaled, tau_bar, cfg);
    double margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const double spent = (1.0 - tau_bar) * alloc.p_u[ku] * cfg.t_frame_s;
      margin = std::min(margin, es.available_j[ku] - spent);
    }
    return margin;
  };
  if (!alloc.slots.empty() && energy_margin(1.0) < 0.0) {
    double lo = 1.0, hi = 1.01;
    if (energy_margin(hi) < 0.0) {
      out.status = FixedTauStatus::SolverFailed;
      out.solver_status = sol.status;
      return out;
    }
    for (int i = 0; i < 100 && hi - lo > 1e-12; ++i) {
      const double mid = 0.5 * (lo + hi);
      (energy_margin(mid) < 0.0 ? lo : hi) = mid;
    }
    for (auto& slot : alloc.slots) slot.w *= std::sqrt(hi);
  }

  double pdl = 0.0;
  for (const auto& slot : alloc.slots) pdl += slot.beta * slot.w.squaredNorm();
  alloc.p_dl = tau_bar * pdl;
  for (int k = 0; k < 2; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    alloc.achieved_rates[ku] = uplink_rate(alloc.p_u[ku], ch.eff_noise_w[ku], tau_bar);
  }

  if (alloc.diagnostics.sca_iterations >= kMaxScaIterations) {
    out.status = FixedTauStatus::NoConvergence;
    out.solver_status = sol.status;
    return out;
  }

  // The linearization minorizes the exact law, so the extracted allocation
  // must satisfy the true constraints up to extraction error.
  const AllocationCheck check = validate_allocation(alloc, ch, cfg);
  if (!check.ok(1e-6, 1e-6, 1e-6)) {
    out.status = FixedTauStatus::SolverFailed;
    out.solver_status = sol.status;
    return out;
  }

  out.status = FixedTauStatus::Converged;
  out.solver_status = sol.status;
  out.allocation = std::move(alloc);
  return out;
}

AllocationCheck validate_allocation(const ResourceAllocation& alloc, const ChannelRealization& ch,
                                    const SystemConfig& cfg, int max_slots) {
  AllocationCheck check;
  check.slot_count_ok = static_cast<int>(alloc.slots.size()) <= max_slots;

  double beta_sum = 0.0;
  for (const auto& slot : alloc.slots) beta_sum += slot.beta;
  // An all-zero downlink (trivial allocation) carries no slots at all.
  check.beta_sum_error = alloc.slots.empty() ? 0.0 : std::abs(beta_sum - 1.0);

  const EnergyState es = energy_state(ch, alloc.slots, alloc.tau_bar, cfg);
  for (int k = 0; k < 2; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double rate = uplink_rate(alloc.p_u[ku], ch.eff_noise_w[ku], alloc.tau_bar);
    check.max_rate_shortfall =
        std::max(check.max_rate_shortfall, cfg.r_req[ku] - rate);
    const double spent = (1.0 - alloc.tau_bar) * alloc.p_u[ku] * cfg.t_frame_s;
    const double avail = es.available_j[ku];
    check.max_energy_violation =
        std::max(check.max_energy_violation, (spent - avail) / std::max(avail, 1e-300));
  }
  return check;
}

AllocateResult allocate(const ChannelRealization& ch, const SystemConfig& cfg, double eps_tau,
                        double eps_sca) {
  AllocateResult out;
  const auto verdict = check_feasibility(cfg, ch);

  if (verdict.status == FeasibilityStatus::Infeasible) {
    out.status = AllocateStatus::Infeasible;
    return out;
  }
  if (verdict.status == FeasibilityStatus::TrivialSolution) {
    ResourceAllocation alloc;
    alloc.tau_bar = 0.0;
    alloc.p_u = *verdict.trivial_powers;
    alloc.p_dl = 0.0;
    for (int k = 0; k < 2; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      alloc.achieved_rates[ku] = uplink_rate(alloc.p_u[ku], ch.eff_noise_w[ku], 0.0);
    }
    out.status = AllocateStatus::Trivial;
    out.allocation = std::move(alloc);
    return out;
  }

  const TauInterval iv = *verdict.interval;
  out.interval = iv;

  std::vector<double> grid;
  for (double t = iv.tau_min; t < iv.tau_max; t += eps_tau) grid.push_back(t);
  grid.push_back(iv.tau_max);

  std::ostringstream diag;
  for (double tau : grid) {
    if (tau > iv.feasible_hi) continue;  // provably infeasible grid point
    const auto res = solve_fixed_tau(tau, ch, cfg, default_init(tau, ch, cfg), eps_sca);
    if (res.status != FixedTauStatus::Converged) {
      diag << "tau=" << tau << " failed: status=" << static_cast<int>(res.status)
           << " solver=" << static_cast<int>(res.solver_status) << "\n";
      continue;
    }
    out.pdl_curve.emplace_back(tau, res.allocation->p_dl);
    if (!out.allocation || res.allocation->p_dl < out.allocation->p_dl) {
      out.allocation = res.allocation;
    }
  }

  if (!out.allocation) {
    out.status = AllocateStatus::AllGridPointsFailed;
    // Attach one subproblem dump for offline inspection.
    std::ostringstream dump;
    conic::dump_subproblem(
        build_subproblem(iv.tau_min, ch, cfg, default_init(iv.tau_min, ch, cfg)), dump);
    out.diagnostic = diag.str() + dump.str();
    return out;
  }
  out.status = AllocateStatus::Ok;
  return out;
}

}  // namespace wpcn
