// SPDX-License-Identifier: Apache-2.0
//
// SDR+SCA resource allocation: subproblem assembly at a linearization
// point, the inner SCA loop at fixed downlink fraction, rank-1 beam
// extraction, and the outer grid search over the downlink fraction.

#ifndef WPCN_ALLOCATOR_HPP
#define WPCN_ALLOCATOR_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wpcn/conic.hpp"
#include "wpcn/feasibility.hpp"
#include "wpcn/system.hpp"

namespace wpcn {

inline constexpr int kNumSlots = 3;        // Proposition 3: N* <= 3
inline constexpr double kBetaFloor = 1e-9;  // below this a slot keeps its old tangent
inline constexpr double kActiveSlotBeta = 1e-6;

/// SCA state: normalized beam outer products W_n^(t) = V_n^(t)/beta_n^(t)
/// kept strictly inside the saturation region, plus the slot fractions.
struct LinearizationPoint {
  std::array<Eigen::MatrixXcd, kNumSlots> w_blocks;
  std::array<double, kNumSlots> betas;
};

struct ResourceAllocation {
  double tau_bar = 0.0;
  std::vector<BeamSlot> slots;                    // active slots only
  std::array<double, 2> p_u = {0.0, 0.0};        // uplink powers, W
  double p_dl = 0.0;                              // tau_bar * sum beta ||w||^2, W
  std::array<double, 2> achieved_rates = {0.0, 0.0};

  struct Diagnostics {
    int sca_iterations = 0;
    std::vector<double> objective_history;        // per SCA iteration, W
    std::vector<double> rank_ratios;              // lambda2/lambda1 per active slot
  } diagnostics;
};

enum class FixedTauStatus { Converged, NoConvergence, RankViolation, SolverFailed };

struct FixedTauResult {
  FixedTauStatus status = FixedTauStatus::SolverFailed;
  conic::SolveStatus solver_status = conic::SolveStatus::NumericalTrouble;
  std::optional<ResourceAllocation> allocation;
};

enum class AllocateStatus { Ok, Trivial, Infeasible, AllGridPointsFailed };

struct AllocateResult {
  AllocateStatus status = AllocateStatus::Infeasible;
  std::optional<ResourceAllocation> allocation;   // present for Ok and Trivial
  std::optional<TauInterval> interval;
  std::vector<std::pair<double, double>> pdl_curve;  // (tau_bar, P_DL) per solved point
  std::string diagnostic;                         // filled on AllGridPointsFailed
};

/// Convex subproblem at a fixed downlink fraction and linearization point:
/// perspective variables V_n = beta_n W_n, linearized harvested-power rows,
/// saturation rows, and the slot simplex. Powers are normalized to the
/// saturation scale before the solver sees them.
conic::SdpSubproblem build_subproblem(double tau_bar, const ChannelRealization& ch,
                                      const SystemConfig& cfg, const LinearizationPoint& lp);

/// MRT beams toward h_1, h_2 and the normalized sum direction, scaled to
/// 0.9 of the saturation input; betas uniform. An optional seed perturbs
/// the beam directions slightly for multi-start checks.
LinearizationPoint default_init(double tau_bar, const ChannelRealization& ch,
                                const SystemConfig& cfg,
                                std::optional<std::uint64_t> perturb_seed = std::nullopt);

/// Inner SCA loop at fixed tau_bar: iterate subproblem solves, update the
/// linearization, stop when the objective settles within eps_sca relative.
/// Extracted allocations are re-validated against the exact harvest law.
FixedTauResult solve_fixed_tau(double tau_bar, const ChannelRealization& ch,
                               const SystemConfig& cfg, const LinearizationPoint& init,
                               double eps_sca);

/// Full Algorithm: feasibility triage, then a grid search over
/// [tau_min, tau_max] with step eps_tau keeping the cheapest allocation.
AllocateResult allocate(const ChannelRealization& ch, const SystemConfig& cfg,
                        double eps_tau, double eps_sca);

/// Shared validator: rate and energy constraints under the exact harvest
/// law, slot-fraction normalization, and slot-count limit.
struct AllocationCheck {
  double max_rate_shortfall = 0.0;     // bits/s/Hz below requirement
  double max_energy_violation = 0.0;   // relative violation of (uplink energy <= available)
  double beta_sum_error = 0.0;         // |sum beta - 1| over active slots
  bool slot_count_ok = true;
  bool ok(double rate_tol = 1e-6, double energy_tol = 1e-8, double beta_tol = 1e-8) const {
    return max_rate_shortfall <= rate_tol && max_energy_violation <= energy_tol &&
           beta_sum_error <= beta_tol && slot_count_ok;
  }
};

AllocationCheck validate_allocation(const ResourceAllocation& alloc, const ChannelRealization& ch,
                                    const SystemConfig& cfg, int max_slots = kNumSlots);

}  // namespace wpcn

#endif
