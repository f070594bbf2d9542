// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "wlsevi/asymptotics.hpp"

#include <limits>
#include <sstream>
#include <vector>

#include "wlsevi/montecarlo.hpp"
#include "wlsevi/random.hpp"
#include "wlsevi/regression.hpp"

namespace wlsevi {

double standardized_statistic(double gamma_hat, double gamma_true, Index k) {
  if (!(gamma_true > 0.0)) {
    throw Error(ErrorCode::NonPositiveTrueGamma, "true gamma must be > 0");
  }
  if (k < 1) throw Error(ErrorCode::KOutOfRange, "k must be >= 1");
  return std::sqrt(3.0 * static_cast<double>(k)) * (gamma_hat - gamma_true) / (2.0 * gamma_true);
}

double NormalityConfig::true_gamma() const {
  return generator == Generator::Model ? gamma : spec.true_gamma();
}

std::string NormalityConfig::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (generator == Generator::Model) {
    os << "model(gamma=" << gamma << ",b=" << b << ",rho=" << rho << ")";
  } else {
    os << "sampling(" << spec.describe() << ",n=" << n << ",rho=" << rho_method.describe() << ")";
  }
  os << ",k=" << k << ",seed=" << master_seed;
  return os.str();
}

NormalityReport normality_report(const NormalityConfig& config, Index reps) {
  if (reps < 100) {
    throw Error(ErrorCode::TooFewReplications, "need at least 100 replications, got " +
                                                   std::to_string(reps));
  }
  const double gamma_true = config.true_gamma();
  if (!(gamma_true > 0.0)) {
    throw Error(ErrorCode::NonPositiveTrueGamma, "true gamma must be > 0");
  }
  if (config.generator == NormalityConfig::Generator::Sampling && config.k > config.n - 1) {
    throw Error(ErrorCode::KOutOfRange, "k must be <= n-1");
  }

  std::vector<double> stats(static_cast<std::size_t>(reps),
                            std::numeric_limits<double>::quiet_NaN());
  detail::parallel_for(reps, config.threads, [&](Index r) {
    const auto seed = replication_seed(config.master_seed, static_cast<std::uint64_t>(r));
    try {
      double gamma_hat;
      if (config.generator == NormalityConfig::Generator::Model) {
        const auto z = sample_model_spacings(config.gamma, config.b, config.rho, config.k, seed);
        gamma_hat = wls_fit(z, config.rho).gamma_hat;
      } else {
        const auto tail = validate_and_sort(sample(config.spec, config.n, seed));
        const double rho = resolve_rho(tail, config.rho_method, config.k);
        gamma_hat = wls_fit(log_spacings(tail, config.k), rho).gamma_hat;
      }
      stats[static_cast<std::size_t>(r)] = standardized_statistic(gamma_hat, gamma_true, config.k);
    } catch (const Error&) {
    }
  });

  NormalityReport report{0.0, 0.0, 0.0, 0.0, reps, 0, config.k, config.describe()};
  double sum = 0.0;
  Index m = 0;
  for (double s : stats) {
    if (std::isnan(s)) {
      ++report.missing;
      continue;
    }
    sum += s;
    ++m;
  }
  if (m < 2) {
    throw Error(ErrorCode::TooFewReplications, "fewer than 2 successful replications");
  }
  const double mean = sum / static_cast<double>(m);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double s : stats) {
    if (std::isnan(s)) continue;
    const double d = s - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double mm = static_cast<double>(m);
  report.sample_mean = mean;
  report.sample_variance = m2 / (mm - 1.0);
  const double pop_var = m2 / mm;
  report.skewness = (m3 / mm) / std::pow(pop_var, 1.5);
  report.excess_kurtosis = (m4 / mm) / (pop_var * pop_var) - 3.0;
  return report;
}

}  // namespace wlsevi
