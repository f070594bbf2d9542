// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "wlsevi/second_order.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "wlsevi/regression.hpp"

namespace wlsevi {

namespace {

constexpr double kMomentClampLow = -8.0;
constexpr double kMomentClampHigh = -0.05;

double sample_variance(const std::vector<double>& xs) {
  const double m = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= m;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / (m - 1.0);
}

double parse_double(std::string_view text) {
  // std::from_chars for double is available in libstdc++ 11.
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::InvalidParameter, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

double min_variance_rho(const OrderedTail& tail, const RhoMethod& method) {
  const auto [k_lo, k_hi] = min_variance_window(tail.n(), method.k_fraction);
  const LogSpacings all = log_spacings(tail, k_hi);

  std::vector<double> grid = method.grid;
  std::sort(grid.begin(), grid.end());  // most negative first, so ties keep it

  double best_rho = grid.front();
  double best_var = std::numeric_limits<double>::infinity();
  std::vector<double> path(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (double rho : grid) {
    for (Index k = k_lo; k <= k_hi; ++k) {
      path[static_cast<std::size_t>(k - k_lo)] = wls_fit(all.head(k), rho).gamma_hat;
    }
    const double var = sample_variance(path);
    if (var < best_var) {
      best_var = var;
      best_rho = rho;
    }
  }
  return best_rho;
}

}  // namespace

RhoMethod RhoMethod::fixed(double value) {
  RhoMethod m;
  m.kind = Kind::Fixed;
  m.fixed_value = value;
  m.validate();
  return m;
}

RhoMethod RhoMethod::moment_type(double tau) {
  RhoMethod m;
  m.kind = Kind::MomentType;
  m.tau = tau;
  m.validate();
  return m;
}

RhoMethod RhoMethod::min_variance(std::vector<double> grid, double k_fraction) {
  RhoMethod m;
  m.kind = Kind::MinVariance;
  m.grid = std::move(grid);
  m.k_fraction = k_fraction;
  m.validate();
  return m;
}

void RhoMethod::validate() const {
  switch (kind) {
    case Kind::Fixed:
      require_negative_rho(fixed_value);
      break;
    case Kind::MomentType:
      if (!std::isfinite(tau)) {
        throw Error(ErrorCode::InvalidParameter, "tau must be finite");
      }
      break;
    case Kind::MinVariance:
      if (grid.empty()) {
        throw Error(ErrorCode::GridEmpty, "minimum-variance grid is empty");
      }
      for (double rho : grid) require_negative_rho(rho);
      if (!(k_fraction > 0.0 && k_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "k_fraction must lie in (0, 1]");
      }
      break;
  }
}

std::string RhoMethod::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Fixed:
      os << "fixed:" << fixed_value;
      break;
    case Kind::MomentType:
      os << "moment";
      if (tau != 0.0) os << ':' << tau;
      break;
    case Kind::MinVariance:
      os << "minvar";
      break;
  }
  return os.str();
}

RhoMethod parse_rho_method(std::string_view text) {
  if (text == "minvar") return RhoMethod::min_variance();
  if (text == "moment") return RhoMethod::moment_type();
  if (text.starts_with("moment:")) return RhoMethod::moment_type(parse_double(text.substr(7)));
  if (text.starts_with("fixed:")) return RhoMethod::fixed(parse_double(text.substr(6)));
  throw Error(ErrorCode::InvalidParameter,
              "rho method must be fixed:<v>, moment or minvar, got '" + std::string(text) + "'");
}

std::pair<Index, Index> min_variance_window(Index n, double k_fraction) {
  const auto lo = std::max<Index>(2, static_cast<Index>(std::ceil(0.1 * static_cast<double>(n))));
  const auto hi = static_cast<Index>(std::floor(k_fraction * static_cast<double>(n - 1)));
  if (hi - lo + 1 < 2) {
    throw Error(ErrorCode::KOutOfRange, "minimum-variance window [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "] has fewer than 2 points (n=" +
                                            std::to_string(n) + ")");
  }
  return {lo, hi};
}

double moment_ratio_statistic(const OrderedTail& tail, Index k1, double tau) {
  if (k1 < 1 || k1 > tail.n() - 1) {
    throw Error(ErrorCode::KOutOfRange, "k1=" + std::to_string(k1) + " out of range");
  }
  const auto& x = tail.values();
  const double anchor = std::log(x[k1]);
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
  for (Index j = 0; j < k1; ++j) {
    const double d = std::log(x[j]) - anchor;
    m1 += d;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double kk = static_cast<double>(k1);
  m1 /= kk;
  m2 /= kk;
  m3 /= kk;
  if (!(m1 > 0.0 && m2 > 0.0 && m3 > 0.0)) {
    throw Error(ErrorCode::DegenerateTail, "top order statistics are all equal");
  }
  double t;
  if (tau == 0.0) {
    const double a = std::log(m1);
    const double b = 0.5 * std::log(m2 / 2.0);
    const double c = std::log(m3 / 6.0) / 3.0;
    t = (a - b) / (b - c);
  } else {
    const double a = std::pow(m1, tau);
    const double b = std::pow(m2 / 2.0, tau / 2.0);
    const double c = std::pow(m3 / 6.0, tau / 3.0);
    t = (a - b) / (b - c);
  }
  if (!std::isfinite(t)) {
    throw Error(ErrorCode::DegenerateTail, "moment ratio is not finite");
  }
  return t;
}

double resolve_rho(const OrderedTail& tail, const RhoMethod& method, Index k) {
  method.validate();
  if (k < 1 || k > tail.n() - 1) {
    throw Error(ErrorCode::KOutOfRange, "k=" + std::to_string(k) + " out of range");
  }
  switch (method.kind) {
    case RhoMethod::Kind::Fixed:
      return method.fixed_value;
    case RhoMethod::Kind::MomentType: {
      const auto k1 = static_cast<Index>(std::floor(std::pow(static_cast<double>(tail.n()), 0.995)));
      const double t = moment_ratio_statistic(tail, k1, method.tau);
      const double rho = -std::abs(3.0 * (t - 1.0) / (t - 3.0));
      if (std::isnan(rho)) {
        throw Error(ErrorCode::DegenerateTail, "moment ratio gives an undefined rho");
      }
      return std::clamp(rho, kMomentClampLow, kMomentClampHigh);
    }
    case RhoMethod::Kind::MinVariance:
      return min_variance_rho(tail, method);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown rho method");
}

}  // namespace wlsevi
