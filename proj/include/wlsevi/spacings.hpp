// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Order statistics, weighted log-spacings, regression weights and covariates.
//
// A sample is stored in descending order, so values()[0] is the maximum.
// The j-th spacing (1-based) pairs values()[j-1] with values()[j]:
//
//   Z_j = j * log(values[j-1] / values[j]),   1 <= j <= k <= n-1.
//
// Z_j does not depend on k, so the spacings for a smaller tail fraction are
// a prefix of the spacings for a larger one (see BasicLogSpacings::head).

#ifndef WLSEVI_SPACINGS_HPP
#define WLSEVI_SPACINGS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "wlsevi/errors.hpp"

namespace wlsevi {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

template <typename Scalar>
class BasicOrderedTail {
 public:
  /// Validates a raw sample and stores a descending-sorted copy.
  static BasicOrderedTail from_sample(std::span<const Scalar> raw) {
    using std::isfinite;
    if (raw.size() < 2) {
      throw Error(ErrorCode::EmptyOrTiny,
                  "need at least 2 observations, got " + std::to_string(raw.size()));
    }
    Vector<Scalar> values(static_cast<Index>(raw.size()));
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!isfinite(raw[i])) {
        throw Error(ErrorCode::NonFinite, "non-finite value at index " + std::to_string(i));
      }
      if (!(raw[i] > Scalar(0))) {
        throw Error(ErrorCode::NonPositive, "non-positive value at index " + std::to_string(i));
      }
      values[static_cast<Index>(i)] = raw[i];
    }
    std::sort(values.begin(), values.end(), std::greater<Scalar>());
    return BasicOrderedTail(std::move(values));
  }

  const Vector<Scalar>& values() const noexcept { return values_; }
  Index n() const noexcept { return values_.size(); }

  friend bool operator==(const BasicOrderedTail& a, const BasicOrderedTail& b) {
    return a.values_ == b.values_;
  }

 private:
  explicit BasicOrderedTail(Vector<Scalar> values) : values_(std::move(values)) {}

  Vector<Scalar> values_;
};

template <typename Scalar>
class BasicLogSpacings {
 public:
  /// Wraps precomputed spacings; n is the size of the originating sample.
  BasicLogSpacings(Vector<Scalar> z, Index n) : z_(std::move(z)), n_(n) {
    using std::isfinite;
    if (k() < 1 || k() > n_ - 1) {
      throw Error(ErrorCode::KOutOfRange, "k=" + std::to_string(k()) +
                                              " outside [1, " + std::to_string(n_ - 1) + "]");
    }
    for (Index j = 0; j < k(); ++j) {
      if (!isfinite(z_[j]) || z_[j] < Scalar(0)) {
        throw Error(ErrorCode::NonFinite, "spacing " + std::to_string(j + 1) +
                                              " is negative or non-finite");
      }
    }
  }

  const Vector<Scalar>& z() const noexcept { return z_; }
  Index k() const noexcept { return z_.size(); }
  Index n() const noexcept { return n_; }

  BasicLogSpacings head(Index k) const {
    if (k < 1 || k > this->k()) {
      throw Error(ErrorCode::KOutOfRange, "prefix k=" + std::to_string(k) +
                                              " outside [1, " + std::to_string(this->k()) + "]");
    }
    return BasicLogSpacings(z_.head(k), n_);
  }

 private:
  Vector<Scalar> z_;
  Index n_;
};

template <typename Scalar>
BasicLogSpacings<Scalar> log_spacings(const BasicOrderedTail<Scalar>& tail, Index k) {
  using std::log;
  const Index n = tail.n();
  if (k < 1 || k > n - 1) {
    throw Error(ErrorCode::KOutOfRange,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");
  }
  const auto& x = tail.values();
  Vector<Scalar> z(k);
  for (Index j = 1; j <= k; ++j) {
    z[j - 1] = Scalar(j) * log(x[j - 1] / x[j]);
  }
  return BasicLogSpacings<Scalar>(std::move(z), n);
}

template <typename Scalar>
struct BasicWeightScheme {
  Vector<Scalar> raw;         // W_j = 1 - j/(k+1)
  Vector<Scalar> normalized;  // W_j / sum(W), sums to one
};

template <typename Scalar>
BasicWeightScheme<Scalar> weights(Index k) {
  if (k < 1) {
    throw Error(ErrorCode::KOutOfRange, "weights need k >= 1, got " + std::to_string(k));
  }
  const Scalar kp1 = Scalar(k + 1);
  BasicWeightScheme<Scalar> w;
  w.raw = Vector<Scalar>::LinSpaced(k, Scalar(1), Scalar(k));
  // sum(W) = k/2, so the normalized weight is 2 (k+1-j) / (k (k+1)).
  w.normalized = (kp1 - w.raw.array()) * (Scalar(2) / (Scalar(k) * kp1));
  w.raw = Scalar(1) - w.raw.array() / kp1;
  return w;
}

template <typename Scalar>
struct BasicCovariates {
  Vector<Scalar> c;  // (j/(k+1))^(-rho), increasing in j
  Scalar rho;
};

inline void require_negative_rho(double rho) {
  if (!(rho < 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::InvalidRho, "rho must be finite and < 0, got " + std::to_string(rho));
  }
}

template <typename Scalar>
BasicCovariates<Scalar> covariates(Index k, Scalar rho) {
  using std::pow;
  if (k < 1) {
    throw Error(ErrorCode::KOutOfRange, "covariates need k >= 1, got " + std::to_string(k));
  }
  require_negative_rho(static_cast<double>(rho));
  const Scalar kp1 = Scalar(k + 1);
  Vector<Scalar> c(k);
  for (Index j = 1; j <= k; ++j) {
    c[j - 1] = pow(Scalar(j) / kp1, -rho);
  }
  return {std::move(c), rho};
}

using OrderedTail = BasicOrderedTail<double>;
using LogSpacings = BasicLogSpacings<double>;
using WeightScheme = BasicWeightScheme<double>;
using Covariates = BasicCovariates<double>;

inline OrderedTail validate_and_sort(std::span<const double> raw) {
  return OrderedTail::from_sample(raw);
}

}  // namespace wlsevi

#endif  // WLSEVI_SPACINGS_HPP
