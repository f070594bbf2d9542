// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "wlsevi/estimators.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace wlsevi {

std::string_view to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::Hill: return "HILL";
    case EstimatorId::BcHill: return "BCHILL";
    case EstimatorId::Ls: return "LS";
    case EstimatorId::Rr: return "RR";
    case EstimatorId::Wls: return "WLS";
  }
  return "?";
}

std::optional<EstimatorId> parse_estimator(std::string_view name) {
  for (EstimatorId id : kAllEstimators) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

bool needs_rho(EstimatorId id) { return id != EstimatorId::Hill; }

PointEstimate estimate_at(EstimatorId id, const LogSpacings& z, double rho) {
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  switch (id) {
    case EstimatorId::Hill:
      return {hill(z), kNaN, 0.0};
    case EstimatorId::BcHill: {
      const auto slope = wls_fit(z, rho);
      return {bchill(z, rho, slope.b_hat, z.n()), rho, 0.0};
    }
    case EstimatorId::Ls:
      return {ls_fit(z, rho).gamma_hat, rho, 0.0};
    case EstimatorId::Rr: {
      const auto fit = ridge_fit_auto(z, rho);
      return {fit.gamma_hat, rho, fit.penalty};
    }
    case EstimatorId::Wls:
      return {wls_fit(z, rho).gamma_hat, rho, 0.0};
  }
  throw Error(ErrorCode::InvalidParameter, "unknown estimator");
}

EviPath evi_path(const OrderedTail& tail, EstimatorId estimator, const RhoMethod& rho_method,
                 Index k_min, Index k_max) {
  const Index n = tail.n();
  if (k_min < 2 || k_min > k_max || k_max > n - 1) {
    throw Error(ErrorCode::KOutOfRange, "need 2 <= k_min <= k_max <= n-1, got [" +
                                            std::to_string(k_min) + ", " + std::to_string(k_max) +
                                            "] with n=" + std::to_string(n));
  }
  double rho = std::numeric_limits<double>::quiet_NaN();
  if (needs_rho(estimator)) {
    rho = resolve_rho(tail, rho_method, k_max);
  }
  const LogSpacings all = log_spacings(tail, k_max);

  EviPath path{estimator, {}, {}, {}, {}, rho_method, n};
  const auto len = static_cast<std::size_t>(k_max - k_min + 1);
  path.k_values.reserve(len);
  path.estimates.reserve(len);
  path.rho_used.reserve(len);
  path.penalties.reserve(len);
  for (Index k = k_min; k <= k_max; ++k) {
    PointEstimate est;
    try {
      est = estimate_at(estimator, all.head(k), rho);
    } catch (const Error& e) {
      throw Error(e.code(), "at k=" + std::to_string(k) + ": " + e.detail());
    }
    path.k_values.push_back(k);
    path.estimates.push_back(est.gamma_hat);
    path.rho_used.push_back(est.rho_used);
    path.penalties.push_back(est.penalty);
  }
  return path;
}

Index optimal_k(std::span<const std::pair<Index, double>> mse_by_k) {
  if (mse_by_k.empty()) {
    throw Error(ErrorCode::EmptyInput, "no (k, mse) pairs");
  }
  Index best_k = 0;
  double best_mse = std::numeric_limits<double>::infinity();
  bool first = true;
  for (const auto& [k, mse] : mse_by_k) {
    if (!(mse >= 0.0)) {
      throw Error(ErrorCode::InvalidParameter, "mse at k=" + std::to_string(k) + " is negative or NaN");
    }
    if (first || mse < best_mse || (mse == best_mse && k < best_k)) {
      best_k = k;
      best_mse = mse;
      first = false;
    }
  }
  return best_k;
}

}  // namespace wlsevi
