// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef WLSEVI_ESTIMATORS_HPP
#define WLSEVI_ESTIMATORS_HPP

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "wlsevi/regression.hpp"
#include "wlsevi/second_order.hpp"
#include "wlsevi/spacings.hpp"

namespace wlsevi {

enum class EstimatorId { Hill, BcHill, Ls, Rr, Wls };

inline constexpr std::array<EstimatorId, 5> kAllEstimators = {
    EstimatorId::Hill, EstimatorId::BcHill, EstimatorId::Ls, EstimatorId::Rr, EstimatorId::Wls};

std::string_view to_string(EstimatorId id);
std::optional<EstimatorId> parse_estimator(std::string_view name);

/// True for every estimator except HILL.
bool needs_rho(EstimatorId id);

struct PointEstimate {
  double gamma_hat;
  double rho_used;  // NaN for HILL
  double penalty;   // RR only, 0 otherwise
};

/// One estimator at one tail fraction. rho is ignored by HILL; BCHILL takes
/// its slope from the WLS fit on the same spacings; RR picks its penalty
/// with ridge_fit_auto.
PointEstimate estimate_at(EstimatorId id, const LogSpacings& z, double rho);

struct EviPath {
  EstimatorId estimator;
  std::vector<Index> k_values;
  std::vector<double> estimates;
  std::vector<double> rho_used;
  std::vector<double> penalties;
  RhoMethod rho_method;
  Index n;
};

/// Estimates over k = k_min..k_max. The rho method is resolved once per
/// tail (none of the methods depends on k); failures carry the offending k.
EviPath evi_path(const OrderedTail& tail, EstimatorId estimator, const RhoMethod& rho_method,
                 Index k_min, Index k_max);

/// The k with the smallest MSE; ties go to the smallest k.
Index optimal_k(std::span<const std::pair<Index, double>> mse_by_k);

}  // namespace wlsevi

#endif  // WLSEVI_ESTIMATORS_HPP
