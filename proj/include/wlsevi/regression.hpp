// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Closed-form fits of the exponential regression model on log-spacings
//
//   Z_j = gamma + b * C_j(rho) + eps_j,   C_j = (j/(k+1))^(-rho),
//
// together with the Hill and bias-corrected Hill estimators.

#ifndef WLSEVI_REGRESSION_HPP
#define WLSEVI_REGRESSION_HPP

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "wlsevi/spacings.hpp"

namespace wlsevi {

template <typename Scalar>
struct BasicRegressionFit {
  Scalar gamma_hat;
  Scalar b_hat;
  Scalar rho_used;
  Index k;
  Vector<Scalar> fitted_means;  // gamma_hat + b_hat * C_j
  Vector<Scalar> residuals;     // Z_j - fitted_means[j]
  Scalar penalty = Scalar(0);   // ridge only
};

using RegressionFit = BasicRegressionFit<double>;

namespace detail {

template <typename Scalar>
void require_regression_k(Index k) {
  if (k < 2) {
    throw Error(ErrorCode::KTooSmall, "regression fits need k >= 2, got " + std::to_string(k));
  }
}

template <typename Scalar>
BasicRegressionFit<Scalar> finish_fit(const Vector<Scalar>& z, const Vector<Scalar>& c,
                                      Scalar gamma_hat, Scalar b_hat, Scalar rho) {
  BasicRegressionFit<Scalar> fit{gamma_hat, b_hat, rho, z.size(), {}, {}};
  fit.fitted_means = (gamma_hat + b_hat * c.array()).matrix();
  fit.residuals = z - fit.fitted_means;
  return fit;
}

// Minimizer of sum_j w_j (Z_j - gamma - b C_j)^2 for weights summing to one.
// Written in centered form; it equals the textbook ratio
//   b = sum w_j (C_j - S1) Z_j / (sum w_j C_j^2 - S1^2)
// because sum w_j (C_j - S1) = 0.
template <typename Scalar>
BasicRegressionFit<Scalar> weighted_fit(const Vector<Scalar>& z, const Vector<Scalar>& c,
                                        const Vector<Scalar>& w, Scalar rho) {
  const Scalar s1 = w.dot(c);
  const Scalar zbar = w.dot(z);
  const auto centered = c.array() - s1;
  const Scalar s2 = (w.array() * centered.square()).sum();
  if (!(s2 > Scalar(0))) {
    throw Error(ErrorCode::KTooSmall, "degenerate covariates (S2 = 0)");
  }
  const Scalar b = (w.array() * centered * (z.array() - zbar)).sum() / s2;
  return finish_fit(z, c, zbar - b * s1, b, rho);
}

// Uniform-weight fit with an optional ridge penalty on the slope. The
// penalty = 0 case is the least squares fit, computed by the same code path.
template <typename Scalar>
BasicRegressionFit<Scalar> uniform_fit(const Vector<Scalar>& z, const Vector<Scalar>& c,
                                       Scalar rho, Scalar penalty) {
  const Scalar cbar = c.mean();
  const Scalar zbar = z.mean();
  const auto centered = c.array() - cbar;
  const Scalar sxx = centered.square().sum();
  if (!(sxx + penalty > Scalar(0))) {
    throw Error(ErrorCode::KTooSmall, "degenerate covariates (Sxx = 0)");
  }
  const Scalar b = (centered * (z.array() - zbar)).sum() / (sxx + penalty);
  auto fit = finish_fit(z, c, zbar - b * cbar, b, rho);
  fit.penalty = penalty;
  return fit;
}

}  // namespace detail

/// Hill estimator: the mean of the log-spacings.
template <typename Scalar>
Scalar hill(const BasicLogSpacings<Scalar>& z) {
  return z.z().mean();
}

/// Weighted least squares fit with linearly decreasing weights
/// W_j = 1 - j/(k+1). The intercept is the reduced-bias estimate of gamma.
template <typename Scalar>
BasicRegressionFit<Scalar> wls_fit(const BasicLogSpacings<Scalar>& z, Scalar rho) {
  detail::require_regression_k<Scalar>(z.k());
  const auto c = covariates<Scalar>(z.k(), rho);
  const auto w = weights<Scalar>(z.k());
  return detail::weighted_fit<Scalar>(z.z(), c.c, w.normalized, rho);
}

/// Same regression with uniform weights 1/k.
template <typename Scalar>
BasicRegressionFit<Scalar> ls_fit(const BasicLogSpacings<Scalar>& z, Scalar rho) {
  detail::require_regression_k<Scalar>(z.k());
  const auto c = covariates<Scalar>(z.k(), rho);
  return detail::uniform_fit<Scalar>(z.z(), c.c, rho, Scalar(0));
}

/// Uniform-weight fit with slope shrinkage:
///   b = sum (C_j - Cbar)(Z_j - Zbar) / (sum (C_j - Cbar)^2 + penalty).
template <typename Scalar>
BasicRegressionFit<Scalar> ridge_fit(const BasicLogSpacings<Scalar>& z, Scalar rho,
                                     Scalar penalty) {
  using std::isfinite;
  if (!(penalty >= Scalar(0))) {
    throw Error(ErrorCode::NegativePenalty, "ridge penalty must be >= 0");
  }
  detail::require_regression_k<Scalar>(z.k());
  const auto c = covariates<Scalar>(z.k(), rho);
  if (!isfinite(penalty)) {
    // Infinite shrinkage: b = 0 and gamma = mean(Z).
    return detail::finish_fit<Scalar>(z.z(), c.c, z.z().mean(), Scalar(0), rho);
  }
  return detail::uniform_fit<Scalar>(z.z(), c.c, rho, penalty);
}

/// Multipliers of k tried when the ridge penalty is chosen automatically.
inline constexpr std::array<double, 7> kRidgePenaltyGrid = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};

/// Approximate MSE of the ridge intercept at a given penalty. With
/// a_j = 1/k - Cbar (C_j - Cbar) / (Sxx + penalty) the intercept is sum a_j Z_j;
/// its variance is taken as gamma^2 sum a_j^2 and its bias as
/// b Cbar penalty / (Sxx + penalty).
template <typename Scalar>
Scalar ridge_amse_proxy(const Vector<Scalar>& c, Scalar gamma, Scalar b, Scalar penalty) {
  const Scalar k = Scalar(c.size());
  const Scalar cbar = c.mean();
  const auto centered = c.array() - cbar;
  const Scalar denom = centered.square().sum() + penalty;
  const Scalar bias = b * cbar * penalty / denom;
  const Scalar var = gamma * gamma * (Scalar(1) / k - cbar * centered / denom).square().sum();
  return bias * bias + var;
}

/// Ridge fit with the penalty picked from kRidgePenaltyGrid * k by the
/// smallest AMSE proxy, evaluated at the least squares (gamma, b).
/// Ties go to the smaller penalty.
template <typename Scalar>
BasicRegressionFit<Scalar> ridge_fit_auto(const BasicLogSpacings<Scalar>& z, Scalar rho) {
  const auto ls = ls_fit(z, rho);
  const auto c = covariates<Scalar>(z.k(), rho);
  Scalar best_penalty = Scalar(0);
  Scalar best_score = std::numeric_limits<Scalar>::infinity();
  for (double mult : kRidgePenaltyGrid) {
    const Scalar penalty = Scalar(mult) * Scalar(z.k());
    const Scalar score = ridge_amse_proxy<Scalar>(c.c, ls.gamma_hat, ls.b_hat, penalty);
    if (score < best_score) {
      best_score = score;
      best_penalty = penalty;
    }
  }
  return ridge_fit(z, rho, best_penalty);
}

/// Bias-corrected Hill: hill * (1 - b/(1-rho) * (n/k)^rho).
template <typename Scalar>
Scalar bchill(const BasicLogSpacings<Scalar>& z, Scalar rho, Scalar b_hat, Index n) {
  using std::pow;
  require_negative_rho(static_cast<double>(rho));
  if (n < z.k() + 1) {
    throw Error(ErrorCode::KOutOfRange, "bias-corrected Hill needs n >= k+1");
  }
  const Scalar ratio = Scalar(n) / Scalar(z.k());
  return hill(z) * (Scalar(1) - b_hat / (Scalar(1) - rho) * pow(ratio, rho));
}

}  // namespace wlsevi

#endif  // WLSEVI_REGRESSION_HPP
