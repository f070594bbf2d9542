// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "wlsevi/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "wlsevi/random.hpp"

namespace wlsevi {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string join_estimators(const std::vector<EstimatorId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += to_string(ids[i]);
  }
  return out;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_estimators(const std::vector<EstimatorId>& ids) {
  if (ids.empty()) {
    throw Error(ErrorCode::EmptyEstimatorSet, "no estimators selected");
  }
}

// Estimates for replication r live at [(e * K + i) * R + r].
struct CellTable {
  Index estimators, ks, reps;
  std::vector<double> values;

  CellTable(Index e, Index k, Index r)
      : estimators(e), ks(k), reps(r), values(static_cast<std::size_t>(e * k * r), kMissing) {}

  double& at(Index e, Index i, Index r) {
    return values[static_cast<std::size_t>((e * ks + i) * reps + r)];
  }
  std::span<const double> cell(Index e, Index i) const {
    return {values.data() + (e * ks + i) * reps, static_cast<std::size_t>(reps)};
  }
};

SimulationSummary summarize(const CellTable& table, const std::vector<EstimatorId>& ids,
                            const std::vector<Index>& ks, double true_gamma) {
  SimulationSummary summary;
  summary.true_gamma = true_gamma;
  for (Index e = 0; e < table.estimators; ++e) {
    for (Index i = 0; i < table.ks; ++i) {
      summary.cells.push_back(summarize_cell(ids[static_cast<std::size_t>(e)],
                                             ks[static_cast<std::size_t>(i)], table.cell(e, i),
                                             true_gamma));
    }
  }
  return summary;
}

}  // namespace

namespace detail {

void parallel_for(Index count, unsigned threads, const std::function<void(Index)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<Index>(threads, std::max<Index>(count, 1)));
  if (threads <= 1) {
    for (Index r = 0; r < count; ++r) body(r);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (Index r = next++; r < count; r = next++) {
        try {
          body(r);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

void SimulationConfig::validate() const {
  require_estimators(estimators);
  if (reps < 1) throw Error(ErrorCode::InvalidConfig, "reps must be >= 1");
  if (k_step < 1) throw Error(ErrorCode::InvalidConfig, "k_step must be >= 1");
  if (k_min < 2 || k_min > k_max || k_max > n - 1) {
    throw Error(ErrorCode::InvalidConfig, "need 2 <= k_min <= k_max <= n-1, got [" +
                                              std::to_string(k_min) + ", " +
                                              std::to_string(k_max) + "] with n=" +
                                              std::to_string(n));
  }
  rho_method.validate();
}

void ModelSimulationConfig::validate() const {
  require_estimators(estimators);
  if (reps < 1) throw Error(ErrorCode::InvalidConfig, "reps must be >= 1");
  if (k < 2) throw Error(ErrorCode::InvalidConfig, "k must be >= 2");
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidConfig, "gamma must be > 0");
  require_negative_rho(rho);
}

const CellSummary* SimulationSummary::find(EstimatorId estimator, Index k) const {
  for (const auto& c : cells) {
    if (c.estimator == estimator && c.k == k) return &c;
  }
  return nullptr;
}

CellSummary summarize_cell(EstimatorId estimator, Index k, std::span<const double> estimates,
                           double true_gamma) {
  CellSummary cell{estimator, k, kMissing, kMissing, kMissing, kMissing, 0, 0};
  double sum = 0.0;
  for (double x : estimates) {
    if (std::isnan(x)) {
      ++cell.missing;
    } else {
      sum += x;
      ++cell.count;
    }
  }
  if (cell.count == 0) return cell;
  const double m = static_cast<double>(cell.count);
  cell.mean = sum / m;
  double sq_err = 0.0;
  double sq_dev = 0.0;
  for (double x : estimates) {
    if (std::isnan(x)) continue;
    sq_err += (x - true_gamma) * (x - true_gamma);
    sq_dev += (x - cell.mean) * (x - cell.mean);
  }
  cell.bias = cell.mean - true_gamma;
  cell.mse = sq_err / m;
  cell.variance = sq_dev / m;
  return cell;
}

LogSpacings model_spacings(double gamma, double b, double rho, std::span<const double> noise) {
  const auto k = static_cast<Index>(noise.size());
  const auto c = covariates<double>(k, rho);
  Vector<double> z(k);
  for (Index j = 0; j < k; ++j) {
    const double mean = gamma + b * c.c[j];
    if (!(mean > 0.0)) {
      throw Error(ErrorCode::NonPositiveMean,
                  "gamma + b*C_j = " + num(mean) + " at j=" + std::to_string(j + 1));
    }
    z[j] = mean * noise[static_cast<std::size_t>(j)];
  }
  return LogSpacings(std::move(z), k + 1);
}

LogSpacings sample_model_spacings(double gamma, double b, double rho, Index k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::KOutOfRange, "k must be >= 1");
  UniformStream uniforms(seed);
  std::vector<double> noise(static_cast<std::size_t>(k));
  for (auto& f : noise) f = -std::log(uniforms.next());
  return model_spacings(gamma, b, rho, noise);
}

SimulationSummary run_simulation(const SimulationConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  std::vector<Index> ks;
  for (Index k = config.k_min; k <= config.k_max; k += config.k_step) ks.push_back(k);
  const auto n_est = static_cast<Index>(config.estimators.size());
  const auto n_k = static_cast<Index>(ks.size());
  const bool any_rho = std::any_of(config.estimators.begin(), config.estimators.end(), needs_rho);

  CellTable table(n_est, n_k, config.reps);
  std::vector<double> rho_by_rep(static_cast<std::size_t>(config.reps), kMissing);

  detail::parallel_for(config.reps, config.threads, [&](Index r) {
    const auto seed = replication_seed(config.master_seed, static_cast<std::uint64_t>(r));
    const auto draws = sample(config.spec, config.n, seed);
    std::optional<OrderedTail> sorted;
    try {
      sorted.emplace(validate_and_sort(draws));
    } catch (const Error&) {
      return;  // the whole replication is missing
    }
    const OrderedTail& tail = *sorted;
    double rho = kMissing;
    if (any_rho) {
      try {
        rho = resolve_rho(tail, config.rho_method, config.k_max);
      } catch (const Error&) {
        // rho-based cells of this replication stay missing
      }
      rho_by_rep[static_cast<std::size_t>(r)] = rho;
    }
    const LogSpacings all = log_spacings(tail, config.k_max);
    for (Index i = 0; i < n_k; ++i) {
      const LogSpacings z = all.head(ks[static_cast<std::size_t>(i)]);
      for (Index e = 0; e < n_est; ++e) {
        const EstimatorId id = config.estimators[static_cast<std::size_t>(e)];
        if (needs_rho(id) && std::isnan(rho)) continue;
        try {
          table.at(e, i, r) = estimate_at(id, z, rho).gamma_hat;
        } catch (const Error&) {
        }
      }
    }
  });

  SimulationSummary summary = summarize(table, config.estimators, ks, config.spec.true_gamma());

  auto& meta = summary.metadata;
  meta["mode"] = "sampling";
  meta["distribution"] = config.spec.describe();
  meta["true_gamma"] = num(config.spec.true_gamma());
  meta["true_rho"] = num(config.spec.true_rho());
  meta["n"] = std::to_string(config.n);
  meta["reps"] = std::to_string(config.reps);
  meta["k_min"] = std::to_string(config.k_min);
  meta["k_max"] = std::to_string(config.k_max);
  meta["k_step"] = std::to_string(config.k_step);
  meta["estimators"] = join_estimators(config.estimators);
  meta["rho_method"] = config.rho_method.describe();
  meta["master_seed"] = std::to_string(config.master_seed);
  meta["generator"] = std::string(kGeneratorId);
  meta["seed_mix"] = std::string(kSeedMixId);
  meta["bchill_slope"] = "wls";
  meta["rr_penalty_rule"] = "argmin ridge AMSE proxy over {0,0.5,1,2,4,8,16}*k";
  if (any_rho) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
    Index ok = 0;
    for (double rho : rho_by_rep) {
      if (std::isnan(rho)) continue;
      lo = std::min(lo, rho);
      hi = std::max(hi, rho);
      sum += rho;
      ++ok;
    }
    meta["rho_resolved_failures"] = std::to_string(config.reps - ok);
    if (ok > 0) {
      meta["rho_resolved_mean"] = num(sum / static_cast<double>(ok));
      meta["rho_resolved_min"] = num(lo);
      meta["rho_resolved_max"] = num(hi);
    }
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  meta["wall_clock_seconds"] = num(elapsed.count());
  return summary;
}

SimulationSummary run_model_simulation(const ModelSimulationConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const auto n_est = static_cast<Index>(config.estimators.size());

  // Validates gamma + b C_j > 0 before spawning work.
  model_spacings(config.gamma, config.b, config.rho,
                 std::vector<double>(static_cast<std::size_t>(config.k), 1.0));

  CellTable table(n_est, 1, config.reps);
  detail::parallel_for(config.reps, config.threads, [&](Index r) {
    const auto seed = replication_seed(config.master_seed, static_cast<std::uint64_t>(r));
    const LogSpacings z = sample_model_spacings(config.gamma, config.b, config.rho, config.k, seed);
    for (Index e = 0; e < n_est; ++e) {
      try {
        table.at(e, 0, r) =
            estimate_at(config.estimators[static_cast<std::size_t>(e)], z, config.rho).gamma_hat;
      } catch (const Error&) {
      }
    }
  });

  SimulationSummary summary = summarize(table, config.estimators, {config.k}, config.gamma);
  auto& meta = summary.metadata;
  meta["mode"] = "model";
  meta["gamma"] = num(config.gamma);
  meta["b"] = num(config.b);
  meta["rho"] = num(config.rho);
  meta["k"] = std::to_string(config.k);
  meta["reps"] = std::to_string(config.reps);
  meta["estimators"] = join_estimators(config.estimators);
  meta["master_seed"] = std::to_string(config.master_seed);
  meta["generator"] = std::string(kGeneratorId);
  meta["seed_mix"] = std::string(kSeedMixId);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  meta["wall_clock_seconds"] = num(elapsed.count());
  return summary;
}

}  // namespace wlsevi
