// SPDX-License-Identifier: Apache-2.0
//
// Per-user harvested-power demand curves, feasibility and trivial-solution
// detection, and the downlink-fraction search interval.

#ifndef WPCN_FEASIBILITY_HPP
#define WPCN_FEASIBILITY_HPP

#include <array>
#include <optional>

#include "wpcn/system.hpp"

namespace wpcn {

struct TauInterval {
  double tau_min = 0.0;
  double tau_max = 0.0;
  std::array<double, 2> tau_min_k = {0.0, 0.0};  // smaller root of f_k = phi(A_s^2)
  std::array<double, 2> tau_max_k = {0.0, 0.0};  // interior minimizer of f_k (0 if none)
  // Upper end of the truly feasible window min_k {larger root of f_k = phi(A_s^2)};
  // grid points beyond it are provably infeasible.
  double feasible_hi = 1.0;
};

enum class FeasibilityStatus { Infeasible, TrivialSolution, NonTrivial };

struct FeasibilityVerdict {
  FeasibilityStatus status;
  std::optional<TauInterval> interval;                 // present iff NonTrivial
  std::optional<std::array<double, 2>> trivial_powers; // present iff TrivialSolution
};

/// Minimum average harvested power user k needs during the downlink phase:
/// f_k(t) = ((1-t)/t)(2^(R_k/(1-t)) - 1) sigma_k^2 - q_k/(T_f t),  t in (0,1).
double demand_f(double tau_bar, int user, const SystemConfig& cfg, double eff_noise);

/// Closed-form derivative of demand_f in tau_bar.
double demand_f_prime(double tau_bar, int user, const SystemConfig& cfg, double eff_noise);

/// Proposition 1/2 classification plus the search interval when non-trivial.
FeasibilityVerdict check_feasibility(const SystemConfig& cfg, const ChannelRealization& ch);

/// Search interval for a verdict already known to be NonTrivial.
TauInterval compute_interval(const SystemConfig& cfg, const ChannelRealization& ch);

}  // namespace wpcn

#endif
