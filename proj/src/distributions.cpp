// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "wlsevi/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wlsevi/random.hpp"
#include "wlsevi/special.hpp"

namespace wlsevi {

namespace {

void require_positive(std::string_view name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidParameter,
                std::string(name) + " must be positive and finite, got " + std::to_string(value));
  }
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Pareto: return "pareto";
    case Family::Burr: return "burr";
    case Family::Frechet: return "frechet";
    case Family::LogGamma: return "loggamma";
  }
  return "?";
}

DistributionSpec DistributionSpec::pareto(double gamma) {
  require_positive("gamma", gamma);
  return {Family::Pareto, {{"gamma", gamma}}, gamma, -std::numeric_limits<double>::infinity()};
}

DistributionSpec DistributionSpec::burr(double eta, double tau, double lambda) {
  require_positive("eta", eta);
  require_positive("tau", tau);
  require_positive("lambda", lambda);
  return {Family::Burr, {{"eta", eta}, {"tau", tau}, {"lambda", lambda}}, 1.0 / (lambda * tau),
          -1.0 / lambda};
}

DistributionSpec DistributionSpec::frechet(double alpha) {
  require_positive("alpha", alpha);
  return {Family::Frechet, {{"alpha", alpha}}, 1.0 / alpha, -1.0};
}

DistributionSpec DistributionSpec::log_gamma(double lambda, double alpha) {
  require_positive("lambda", lambda);
  require_positive("alpha", alpha);
  return {Family::LogGamma, {{"lambda", lambda}, {"alpha", alpha}}, 1.0 / lambda, 0.0};
}

std::string DistributionSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(family_) << '(';
  bool first = true;
  for (const auto& [name, value] : params_) {
    os << (first ? "" : ",") << name << '=' << value;
    first = false;
  }
  os << ')';
  return os.str();
}

double quantile(const DistributionSpec& spec, double u) {
  if (!(u >= 0.0 && u < 1.0)) {
    throw Error(ErrorCode::UOutOfRange, "u must lie in [0, 1), got " + std::to_string(u));
  }
  const auto& p = spec.params();
  switch (spec.family()) {
    case Family::Pareto:
      return std::exp(-p.at("gamma") * std::log1p(-u));
    case Family::Burr: {
      // (1-u)^(-1/lambda) - 1, without cancellation for small u.
      const double base = std::expm1(-std::log1p(-u) / p.at("lambda"));
      return p.at("eta") * std::pow(base, 1.0 / p.at("tau"));
    }
    case Family::Frechet:
      if (u == 0.0) return 0.0;
      return std::pow(-std::log(u), -1.0 / p.at("alpha"));
    case Family::LogGamma:
      return std::exp(gamma_quantile(u, p.at("alpha"), p.at("lambda")));
  }
  throw Error(ErrorCode::InvalidParameter, "unknown family");
}

double cdf(const DistributionSpec& spec, double x) {
  const auto& p = spec.params();
  switch (spec.family()) {
    case Family::Pareto:
      return x <= 1.0 ? 0.0 : -std::expm1(-std::log(x) / p.at("gamma"));
    case Family::Burr: {
      if (x <= 0.0) return 0.0;
      const double t = std::pow(x / p.at("eta"), p.at("tau"));
      return -std::expm1(-p.at("lambda") * std::log1p(t));
    }
    case Family::Frechet:
      return x <= 0.0 ? 0.0 : std::exp(-std::pow(x, -p.at("alpha")));
    case Family::LogGamma:
      return x <= 1.0 ? 0.0 : regularized_gamma_p(p.at("alpha"), p.at("lambda") * std::log(x));
  }
  throw Error(ErrorCode::InvalidParameter, "unknown family");
}

std::vector<double> sample(const DistributionSpec& spec, Index n, std::uint64_t seed) {
  if (n < 1) {
    throw Error(ErrorCode::InvalidParameter, "sample size must be >= 1");
  }
  UniformStream uniforms(seed);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& x : out) x = quantile(spec, uniforms.next());
  return out;
}

}  // namespace wlsevi
