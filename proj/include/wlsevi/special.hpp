// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef WLSEVI_SPECIAL_HPP
#define WLSEVI_SPECIAL_HPP

namespace wlsevi {

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Quantile of Gamma(shape, rate): the y >= 0 with P(shape, rate * y) = u.
/// Safeguarded Newton on a bracket, converged to 1e-10 absolute in y.
double gamma_quantile(double u, double shape, double rate);

}  // namespace wlsevi

#endif  // WLSEVI_SPECIAL_HPP
