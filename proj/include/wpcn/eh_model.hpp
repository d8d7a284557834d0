// SPDX-License-Identifier: Apache-2.0
//
// Circuit-based non-linear energy-harvesting transfer function: the
// Lambert-W/Bessel law with hard saturation, its derivative and inverse,
// plus the sigmoidal and linear surrogate models used by the baselines.

#ifndef WPCN_EH_MODEL_HPP
#define WPCN_EH_MODEL_HPP

#include <cstddef>

namespace wpcn {

/// Constants of the rectifier circuit law. All strictly positive.
struct EhCircuitParams {
  double lambda;  // W, output scale
  double mu;      // dimensionless
  double nu;      // 1/sqrt(W)
  double a_s_sq;  // W, saturation input power

  void validate() const;
};

/// Normalized sigmoid surrogate: psi(x) = [M/(1+exp(-a(x-b))) - M*Omega]/(1-Omega),
/// Omega = 1/(1+exp(a*b)), so psi(0) = 0 and psi -> m_sat as x -> inf.
struct SigmoidEhParams {
  double m_sat;  // W
  double a;      // 1/W
  double b;      // W
};

/// Linear surrogate: eta * x, 0 < eta <= 1.
struct LinearEhParams {
  double eta;
};

/// Fitted surrogates with fit diagnostics.
struct SurrogateFit {
  SigmoidEhParams sigmoid;
  LinearEhParams linear;
  double sigmoid_rms;  // RMS residual over the fitting grid
  double linear_rms;
};

/// Harvested power for received power x >= 0 (both in watts).
/// Monotone non-decreasing, clamped at phi(a_s_sq), phi(0) = 0.
double phi(double x, const EhCircuitParams& p);

/// d phi / dx on the open interval (0, a_s_sq). The derivative at and
/// beyond saturation is not defined for callers; linearization points
/// must stay strictly interior.
double phi_prime(double x, const EhCircuitParams& p);

/// Unique x in [0, a_s_sq] with phi(x) = rho, bisection to 1e-10 relative.
/// Throws std::range_error for rho > phi(a_s_sq): the demanded power
/// exceeds the saturation ceiling.
double phi_inverse(double rho, const EhCircuitParams& p);

/// Least-squares fit of the sigmoid (m_sat pinned to phi(a_s_sq)) and of
/// the linear law over a uniform grid on [0, a_s_sq]. grid_size >= 16.
SurrogateFit fit_surrogates(const EhCircuitParams& p, std::size_t grid_size = 256);

/// Surrogate sigmoid value at x >= 0.
double sigmoid_eval(double x, const SigmoidEhParams& s);

/// Closed-form inverse of the normalized sigmoid, 0 <= rho < m_sat.
double sigmoid_inverse(double rho, const SigmoidEhParams& s);

}  // namespace wpcn

#endif
