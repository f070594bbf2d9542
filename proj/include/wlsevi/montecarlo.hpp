// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef WLSEVI_MONTECARLO_HPP
#define WLSEVI_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wlsevi/distributions.hpp"
#include "wlsevi/estimators.hpp"
#include "wlsevi/second_order.hpp"

namespace wlsevi {

struct SimulationConfig {
  DistributionSpec spec = DistributionSpec::pareto(1.0);
  Index n = 200;
  Index reps = 1000;
  Index k_min = 5;
  Index k_max = 199;
  Index k_step = 1;  // evaluate every k_step-th k starting at k_min
  std::vector<EstimatorId> estimators{kAllEstimators.begin(), kAllEstimators.end()};
  RhoMethod rho_method;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// The exact regression model variant: spacings are generated directly as
/// Z_j = (gamma + b C_j(rho)) f_j and every rho-based estimator is given the
/// true rho.
struct ModelSimulationConfig {
  double gamma = 1.0;
  double b = 0.0;
  double rho = -1.0;
  Index k = 100;
  Index reps = 1000;
  std::vector<EstimatorId> estimators{kAllEstimators.begin(), kAllEstimators.end()};
  std::uint64_t master_seed = 1;
  unsigned threads = 0;

  void validate() const;
};

struct CellSummary {
  EstimatorId estimator;
  Index k;
  double mean;
  double bias;      // mean - true gamma
  double mse;       // mean((estimate - gamma)^2)
  double variance;  // divisor = number of non-missing replications
  Index count;
  Index missing;
};

struct SimulationSummary {
  double true_gamma = 0.0;
  std::vector<CellSummary> cells;  // estimator-major (config order), then k
  std::map<std::string, std::string> metadata;

  const CellSummary* find(EstimatorId estimator, Index k) const;
};

/// Aggregates one cell. NaN entries are missing replications; the remaining
/// ones are summed in the order given.
CellSummary summarize_cell(EstimatorId estimator, Index k, std::span<const double> estimates,
                           double true_gamma);

/// Z_j = (gamma + b C_j(rho)) f_j for a caller-supplied noise vector f.
LogSpacings model_spacings(double gamma, double b, double rho, std::span<const double> noise);

/// Same with f_j = -log(U_j), U_j from UniformStream(seed).
LogSpacings sample_model_spacings(double gamma, double b, double rho, Index k, std::uint64_t seed);

SimulationSummary run_simulation(const SimulationConfig& config);
SimulationSummary run_model_simulation(const ModelSimulationConfig& config);

namespace detail {

/// Runs body(r) for r in [0, count) on up to `threads` workers.
void parallel_for(Index count, unsigned threads, const std::function<void(Index)>& body);

}  // namespace detail

}  // namespace wlsevi

#endif  // WLSEVI_MONTECARLO_HPP
