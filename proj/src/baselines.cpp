// SPDX-License-Identifier: Apache-2.0

#include "wpcn/baselines.hpp"

#include <cmath>

#include "wpcn/conic.hpp"
#include "wpcn/feasibility.hpp"

namespace wpcn {

BaselineContext::BaselineContext(const SystemConfig& cfg)
    : cfg_(cfg), fit_(fit_surrogates(cfg.eh)) {}

BaselineContext::BaselineContext(const SystemConfig& cfg, SurrogateFit precomputed)
    : cfg_(cfg), fit_(std::move(precomputed)) {}

std::optional<CovarianceDesign> baseline_design(const ChannelRealization& ch,
                                                const BaselineContext& ctx, BaselineModel model,
                                                double tau_bar) {
  const SystemConfig& cfg = ctx.cfg();
  const int nt = cfg.n_antennas;

  // Demand curves are model-independent; the surrogate only converts the
  // harvested-power requirement into a received-power trace constraint.
  std::array<double, 2> required_received;
  for (int k = 0; k < 2; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    const double fk = std::max(0.0, demand_f(tau_bar, k, cfg, ch.eff_noise_w[ku]));
    if (model == BaselineModel::Sigmoid) {
      if (fk >= ctx.fit().sigmoid.m_sat) return std::nullopt;  // beyond surrogate range
      required_received[ku] = sigmoid_inverse(fk, ctx.fit().sigmoid);
    } else {
      required_received[ku] = fk / ctx.fit().linear.eta;
    }
  }

  const double hmax2 = std::max(ch.user(0).squaredNorm(), ch.user(1).squaredNorm());
  const double p0 = cfg.eh.a_s_sq / hmax2;   // beam-power scale
  const double r0 = cfg.eh.a_s_sq;           // received-power scale

  conic::SdpSubproblem sp;
  sp.psd_block_dims = {nt};
  sp.n_scalars = 0;
  sp.objective_blocks = {tau_bar * Eigen::MatrixXcd::Identity(nt, nt)};
  for (int k = 0; k < 2; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    conic::ConstraintRow row;
    row.block_coeffs = {(p0 / r0) * (ch.user(k) * ch.user(k).adjoint())};
    row.rhs = required_received[ku] / r0;
    row.sense = conic::Sense::GreaterEqual;
    row.label = "harvest_" + std::to_string(k);
    sp.constraints.push_back(std::move(row));
  }

  const auto sol = conic::solve(sp);
  if (sol.status != conic::SolveStatus::Optimal) return std::nullopt;

  CovarianceDesign design;
  design.tau_bar = tau_bar;
  design.x_tilde = p0 * sol.v_blocks[0];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(design.x_tilde);
  const double trace = std::max(es.eigenvalues().sum(), 0.0);
  std::vector<std::pair<double, Eigen::Index>> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 1e-8 * trace) keep.emplace_back(es.eigenvalues()(i), i);
  }
  if (keep.empty()) return std::nullopt;
  const double n_tilde = static_cast<double>(keep.size());
  for (const auto& [lam, idx] : keep) {
    // beta_n = 1/N_tilde; X = sum_n beta_n w_n w_n^H requires ||w_n||^2 = N_tilde lambda_n.
    design.beams.push_back({1.0 / n_tilde, std::sqrt(n_tilde * lam) * es.eigenvectors().col(idx)});
  }
  return design;
}

std::optional<TrueModelEvaluation> evaluate_under_true_model(const CovarianceDesign& design,
                                                             const ChannelRealization& ch,
                                                             const SystemConfig& cfg) {
  const double tau = design.tau_bar;

  auto rates_at = [&](double kappa, TrueModelEvaluation* fill) {
    std::vector<BeamSlot> scaled = design.beams;
    for (auto& slot : scaled) slot.w *= std::sqrt(kappa);
    const EnergyState es = energy_state(ch, scaled, tau, cfg);
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      // Uplink power at the energy-constraint boundary.
      const double pu = es.available_j[ku] / ((1.0 - tau) * cfg.t_frame_s);
      const double rate = uplink_rate(pu, ch.eff_noise_w[ku], tau);
      worst = std::min(worst, rate - cfg.r_req[ku]);
      if (fill) {
        fill->p_u[ku] = pu;
        fill->achieved_rates[ku] = rate;
      }
    }
    return worst;
  };

  double kappa = 1.0;
  if (rates_at(1.0, nullptr) < 0.0) {
    // Expand until feasible; the harvest saturates once every served user
    // is pushed past A_s^2 on every beam, so cap the expansion.
    double lo = 1.0, hi = 2.0;
    bool bracketed = false;
    for (int i = 0; i < 80; ++i) {
      if (rates_at(hi, nullptr) >= 0.0) {
        bracketed = true;
        break;
      }
      lo = hi;
      hi *= 2.0;
      if (hi > 1e18) break;
    }
    if (!bracketed) return std::nullopt;  // saturation ceiling
    for (int i = 0; i < 200 && (hi - lo) > 1e-6 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (rates_at(mid, nullptr) < 0.0 ? lo : hi) = mid;
    }
    kappa = hi;
  }

  TrueModelEvaluation eval;
  eval.kappa = kappa;
  rates_at(kappa, &eval);
  eval.p_dl_actual = kappa * tau * design.x_tilde.trace().real();
  return eval;
}

BaselineAllocateResult baseline_allocate(const ChannelRealization& ch, const BaselineContext& ctx,
                                         BaselineModel model, double eps_tau) {
  const SystemConfig& cfg = ctx.cfg();
  BaselineAllocateResult out;

  const auto verdict = check_feasibility(cfg, ch);
  if (verdict.status == FeasibilityStatus::Infeasible) {
    out.status = AllocateStatus::Infeasible;
    return out;
  }
  if (verdict.status == FeasibilityStatus::TrivialSolution) {
    ResourceAllocation alloc;
    alloc.tau_bar = 0.0;
    alloc.p_u = *verdict.trivial_powers;
    for (int k = 0; k < 2; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      alloc.achieved_rates[ku] = uplink_rate(alloc.p_u[ku], ch.eff_noise_w[ku], 0.0);
    }
    out.status = AllocateStatus::Trivial;
    out.allocation = std::move(alloc);
    return out;
  }

  const TauInterval iv = *verdict.interval;
  std::vector<double> grid;
  for (double t = iv.tau_min; t < iv.tau_max; t += eps_tau) grid.push_back(t);
  grid.push_back(iv.tau_max);

  for (double tau : grid) {
    if (tau > iv.feasible_hi) continue;
    const auto design = baseline_design(ch, ctx, model, tau);
    if (!design) continue;
    const auto eval = evaluate_under_true_model(*design, ch, cfg);
    if (!eval) continue;

    ResourceAllocation alloc;
    alloc.tau_bar = tau;
    alloc.slots = design->beams;
    for (auto& slot : alloc.slots) slot.w *= std::sqrt(eval->kappa);
    alloc.p_u = eval->p_u;
    alloc.p_dl = eval->p_dl_actual;
    alloc.achieved_rates = eval->achieved_rates;

    if (!out.allocation || alloc.p_dl < out.allocation->p_dl) {
      out.allocation = std::move(alloc);
    }
  }

  out.status = out.allocation ? AllocateStatus::Ok : AllocateStatus::AllGridPointsFailed;
  return out;
}

}  // namespace wpcn
