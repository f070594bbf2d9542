// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Pareto-type families used in the simulation study, sampled by inversion.
//
//   Pareto(gamma)          1-F(x) = x^(-1/gamma), x >= 1
//   Burr(eta, tau, lambda) 1-F(x) = (1 + (x/eta)^tau)^(-lambda)
//   Frechet(alpha)         F(x)   = exp(-x^(-alpha))
//   LogGamma(lambda, alpha) log X ~ Gamma(shape alpha, rate lambda)

#ifndef WLSEVI_DISTRIBUTIONS_HPP
#define WLSEVI_DISTRIBUTIONS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wlsevi/spacings.hpp"

namespace wlsevi {

enum class Family { Pareto, Burr, Frechet, LogGamma };

std::string_view to_string(Family family);

class DistributionSpec {
 public:
  static DistributionSpec pareto(double gamma);
  static DistributionSpec burr(double eta, double tau, double lambda);
  static DistributionSpec frechet(double alpha);
  static DistributionSpec log_gamma(double lambda, double alpha);

  Family family() const noexcept { return family_; }

  /// Named shape parameters, e.g. {"eta", 1}, {"tau", 1.41}, {"lambda", 1.41}.
  const std::map<std::string, double>& params() const noexcept { return params_; }
  double param(const std::string& name) const { return params_.at(name); }

  /// Extreme value index: Burr 1/(lambda tau), Frechet 1/alpha,
  /// Log-Gamma 1/lambda, Pareto gamma.
  double true_gamma() const noexcept { return true_gamma_; }

  /// Second-order parameter: Burr -1/lambda, Frechet -1, Log-Gamma 0
  /// (logarithmic slow variation). Strict Pareto has no second-order term
  /// and reports -infinity.
  double true_rho() const noexcept { return true_rho_; }

  std::string describe() const;

 private:
  DistributionSpec(Family family, std::map<std::string, double> params, double gamma, double rho)
      : family_(family), params_(std::move(params)), true_gamma_(gamma), true_rho_(rho) {}

  Family family_;
  std::map<std::string, double> params_;
  double true_gamma_;
  double true_rho_;
};

/// Inverse CDF on [0, 1).
double quantile(const DistributionSpec& spec, double u);

/// CDF evaluated directly from the closed-form tail.
double cdf(const DistributionSpec& spec, double x);

/// n draws quantile(spec, U_i), U_i from UniformStream(seed).
std::vector<double> sample(const DistributionSpec& spec, Index n, std::uint64_t seed);

}  // namespace wlsevi

#endif  // WLSEVI_DISTRIBUTIONS_HPP
