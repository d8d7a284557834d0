// SPDX-License-Identifier: Apache-2.0
//
// Scalar special functions for the energy-harvesting transfer law:
// principal-branch Lambert W, modified Bessel functions of the first
// kind (orders 0 and 1), and overflow-safe log-domain compositions.

#ifndef WPCN_SPECFUN_HPP
#define WPCN_SPECFUN_HPP

namespace wpcn {

/// Natural log of a strictly positive quantity. exp(log_magnitude) may
/// overflow a double and must never be formed implicitly; compositions
/// stay in the log domain until a bounded value is extracted.
struct LogDomainValue {
  double log_magnitude = 0.0;
};

/// Principal branch W0 of the Lambert W function, w*exp(w) = x.
/// Requires x >= -1/e (tolerance 1e-12 at the branch point); w >= -1.
double lambert_w0(double x);

/// W0(exp(l)) without forming exp(l). For l > 1 solves w + ln w = l
/// directly; below that delegates to lambert_w0(exp(l)).
double lambert_w0_of_exp(LogDomainValue l);

/// Modified Bessel function I0(t), t >= 0. Overflows to +inf for
/// t > ~709; use log_bessel_i0 when the magnitude may be large.
double bessel_i0(double t);

/// log(I0(t)), finite for every t >= 0.
LogDomainValue log_bessel_i0(double t);

/// I1(t)/I0(t) in [0, 1), monotone increasing, ~t/2 near 0 and
/// ~1 - 1/(2t) for large t.
double bessel_i1_over_i0(double t);

/// (I1(t)/I0(t))/t, finite at t = 0 where it equals 1/2. Stable form
/// of the ratio needed by the EH-model derivative at small inputs.
double bessel_i1_over_i0_over_t(double t);

}  // namespace wpcn

#endif
