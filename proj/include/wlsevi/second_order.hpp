// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef WLSEVI_SECOND_ORDER_HPP
#define WLSEVI_SECOND_ORDER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "wlsevi/spacings.hpp"

namespace wlsevi {

/// How the second-order parameter rho < 0 is supplied to the regression
/// estimators.
struct RhoMethod {
  enum class Kind { Fixed, MomentType, MinVariance };

  Kind kind = Kind::MinVariance;
  double fixed_value = -1.0;
  double tau = 0.0;
  std::vector<double> grid = default_grid();
  double k_fraction = 0.9;

  static std::vector<double> default_grid() { return {-0.25, -0.5, -0.75, -1.0, -1.5, -2.0, -3.0}; }

  static RhoMethod fixed(double value);
  static RhoMethod moment_type(double tau = 0.0);
  static RhoMethod min_variance(std::vector<double> grid = default_grid(), double k_fraction = 0.9);

  /// Throws InvalidRho / GridEmpty / InvalidParameter on a malformed method.
  void validate() const;

  /// "fixed:<v>", "moment" or "minvar" (the command-line spelling).
  std::string describe() const;
};

/// Parses "fixed:<v>", "moment[:<tau>]" or "minvar".
RhoMethod parse_rho_method(std::string_view text);

/// Second-order parameter estimate for a tail.
///
/// Fixed returns the stored value. MomentType is the moment-ratio estimator
/// built from M^(i) = mean_{j<=k1} (log X_(j) - log X_(k1+1))^i, i = 1..3,
/// with k1 = floor(n^0.995), clamped to [-8, -0.05]. MinVariance computes the
/// WLS path over k in [ceil(0.1 n), floor(k_fraction (n-1))] for each grid
/// value and returns the one whose path has the smallest sample variance
/// (ties go to the most negative value).
///
/// The last two do not depend on k; k is checked against 1 <= k <= n-1.
double resolve_rho(const OrderedTail& tail, const RhoMethod& method, Index k);

/// Moment-ratio statistic T(tau) used by the MomentType estimator. Exposed
/// for testing.
double moment_ratio_statistic(const OrderedTail& tail, Index k1, double tau);

/// The k window scanned by MinVariance for a sample of size n.
std::pair<Index, Index> min_variance_window(Index n, double k_fraction);

}  // namespace wlsevi

#endif  // WLSEVI_SECOND_ORDER_HPP
