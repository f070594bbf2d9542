// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <chrono>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wlsevi/asymptotics.hpp"
#include "wlsevi/cli.hpp"
#include "wlsevi/random.hpp"

namespace wlsevi::cli {

namespace {

constexpr const char* kDataUrl = "https://lstat.kuleuven.be/Wiley/";
constexpr Index kSmallKWarning = 10;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string out = "wlsevi";
  for (const auto& a : args) out += " " + a;
  return out;
}

std::vector<EstimatorId> parse_estimator_list(const std::string& text) {
  if (text.empty() || text == "all") return {kAllEstimators.begin(), kAllEstimators.end()};
  std::vector<EstimatorId> ids;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    for (auto& ch : item) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    const auto id = parse_estimator(item);
    if (!id) {
      throw Error(ErrorCode::InvalidParameter,
                  "unknown estimator '" + item + "' (expected HILL, BCHILL, LS, RR, WLS)");
    }
    if (std::find(ids.begin(), ids.end(), *id) == ids.end()) ids.push_back(*id);
  }
  if (ids.empty()) throw Error(ErrorCode::EmptyEstimatorSet, "no estimators selected");
  return ids;
}

std::string estimator_names(const std::vector<EstimatorId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + std::string(to_string(ids[i]));
  return out;
}

// Writes contents to path (atomically) with a key=value sidecar, or to out
// when path is empty.
void emit(const std::string& path, const std::string& contents,
          std::map<std::string, std::string> metadata, std::ostream& out) {
  if (path.empty()) {
    out << contents;
    return;
  }
  write_file_atomically(path, contents);
  std::ostringstream meta;
  write_metadata(meta, metadata);
  write_file_atomically(path + ".meta", meta.str());
}

std::map<std::string, std::string> base_metadata(const std::vector<std::string>& args) {
  return {{"tool_version", kToolVersion},
          {"command_line", join_args(args)},
          {"timestamp", utc_timestamp()},
          {"generator", std::string(kGeneratorId)},
          {"seed_mix", std::string(kSeedMixId)}};
}

struct EstimateOptions {
  std::string data;
  std::string column;
  std::string delimiter = ",";
  std::string header = "auto";
  std::string estimators = "all";
  std::string rho = "minvar";
  std::string out;
  Index k = 0;
  Index k_min = 0;
  Index k_max = 0;
};

int cmd_estimate(const EstimateOptions& o, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  std::vector<EstimatorId> ids;
  RhoMethod method;
  DatasetOptions dopts;
  try {
    ids = parse_estimator_list(o.estimators);
    method = parse_rho_method(o.rho);
    dopts.column = o.column;
    dopts.delimiter = o.delimiter == "tab" ? "\t" : o.delimiter == "space" ? " " : o.delimiter;
    if (o.header == "yes") dopts.header = true;
    else if (o.header == "no") dopts.header = false;
    else if (o.header != "auto") throw Error(ErrorCode::InvalidParameter, "--header must be auto, yes or no");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  Dataset data;
  {
    std::ifstream in(o.data);
    if (!in) {
      err << "error: cannot open " << o.data << '\n';
      return kParseError;
    }
    try {
      data = read_dataset(in, dopts);
    } catch (const ParseError& e) {
      err << o.data << ": " << e.what() << '\n';
      return kParseError;
    }
  }

  const OrderedTail tail = validate_and_sort(data.values);
  const Index n = tail.n();
  Index k_min = o.k_min, k_max = o.k_max;
  if (o.k > 0) {
    k_min = k_max = o.k;
  } else {
    if (k_min == 0) k_min = std::min<Index>(5, n - 1);
    if (k_max == 0) k_max = n - 1;
  }
  if (k_min < 2 || k_min > k_max || k_max > n - 1) {
    err << "error: need 2 <= k_min <= k_max <= n-1 (n=" << n << "), got [" << k_min << ", "
        << k_max << "]\n";
    return kConfigError;
  }

  const bool any_rho = std::any_of(ids.begin(), ids.end(), needs_rho);
  std::vector<EviPath> paths;
  double rho = std::numeric_limits<double>::quiet_NaN();
  try {
    if (any_rho) rho = resolve_rho(tail, method, k_max);
    const RhoMethod resolved = any_rho ? RhoMethod::fixed(rho) : method;
    for (EstimatorId id : ids) paths.push_back(evi_path(tail, id, resolved, k_min, k_max));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kEstimationError;
  }

  if (any_rho && k_min < kSmallKWarning) {
    err << "warning: regression fits below k=" << kSmallKWarning << " are unstable\n";
  }
  for (const auto& p : paths) {
    const auto negatives = std::count_if(p.estimates.begin(), p.estimates.end(),
                                         [](double g) { return g < 0.0; });
    if (negatives > 0) {
      err << "warning: " << to_string(p.estimator) << " returned negative gamma_hat at "
          << negatives << " k value(s)\n";
    }
  }

  std::ostringstream csv;
  write_path_csv(csv, paths);
  auto meta = base_metadata(args);
  meta["data"] = o.data;
  meta["column"] = data.column;
  meta["n"] = std::to_string(n);
  meta["k_min"] = std::to_string(k_min);
  meta["k_max"] = std::to_string(k_max);
  meta["estimators"] = estimator_names(ids);
  meta["rho_method"] = method.describe();
  meta["rho_resolved"] = format_number(rho);
  meta["bchill_slope"] = "wls";
  std::string penalties;
  for (const auto& p : paths) {
    if (p.estimator != EstimatorId::Rr) continue;
    for (std::size_t i = 0; i < p.penalties.size(); ++i) {
      penalties += (i ? "," : "") + format_number(p.penalties[i]);
    }
  }
  if (!penalties.empty()) meta["rr_penalties"] = penalties;
  try {
    emit(o.out, csv.str(), std::move(meta), out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

struct SimulateOptions {
  std::string dist;
  std::optional<double> gamma, eta, tau, lambda, alpha;
  Index n = 200;
  Index reps = 1000;
  std::uint64_t seed = 1;
  Index k_min = 5;
  Index k_max = 0;
  Index k_step = 1;
  std::string estimators = "all";
  std::string rho = "minvar";
  std::string out = "summary.csv";
  unsigned threads = 0;
};

DistributionSpec make_spec(const SimulateOptions& o) {
  auto need = [&](const std::optional<double>& v, const char* flag) {
    if (!v) throw Error(ErrorCode::InvalidConfig, "--dist " + o.dist + " requires " + flag);
    return *v;
  };
  if (o.dist == "pareto") return DistributionSpec::pareto(need(o.gamma, "--gamma"));
  if (o.dist == "burr") {
    return DistributionSpec::burr(o.eta.value_or(1.0), need(o.tau, "--tau"), need(o.lambda, "--lambda"));
  }
  if (o.dist == "frechet") return DistributionSpec::frechet(need(o.alpha, "--alpha"));
  if (o.dist == "loggamma") {
    return DistributionSpec::log_gamma(need(o.lambda, "--lambda"), need(o.alpha, "--alpha"));
  }
  throw Error(ErrorCode::InvalidConfig, "--dist must be pareto, burr, frechet or loggamma");
}

int cmd_simulate(const SimulateOptions& o, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  SimulationConfig config;
  try {
    config.spec = make_spec(o);
    config.n = o.n;
    config.reps = o.reps;
    config.master_seed = o.seed;
    config.k_min = o.k_min;
    config.k_max = o.k_max > 0 ? o.k_max : o.n - 1;
    config.k_step = o.k_step;
    config.estimators = parse_estimator_list(o.estimators);
    config.rho_method = parse_rho_method(o.rho);
    config.threads = o.threads;
    config.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  SimulationSummary summary;
  try {
    summary = run_simulation(config);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kEstimationError;
  }

  std::ostringstream csv;
  write_summary_csv(csv, summary);
  auto meta = base_metadata(args);
  for (const auto& [key, value] : summary.metadata) meta[key] = value;
  try {
    write_file_atomically(o.out, csv.str());
    std::ostringstream m;
    write_metadata(m, meta);
    write_file_atomically(o.out + ".meta", m.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  out << "wrote " << o.out << " (" << summary.cells.size() << " cells)\n";
  return kOk;
}

struct DiagnoseOptions {
  std::string rho;
  Index k_min = 2;
  Index k_max = 100;
  Index k_step = 1;
  double gamma = 1.0;
  int amse_coef = 2;
  std::string out;
};

int cmd_diagnose(const DiagnoseOptions& o, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  double rho = 0.0;
  AmseCoefficient coef = AmseCoefficient::Two;
  try {
    std::string_view text = o.rho;
    if (text.starts_with("fixed:")) text.remove_prefix(6);
    rho = RhoMethod::fixed(std::stod(std::string(text))).fixed_value;
    if (o.k_min < 2 || o.k_min > o.k_max || o.k_step < 1) {
      throw Error(ErrorCode::InvalidConfig, "need 2 <= k_min <= k_max and k_step >= 1");
    }
    if (!(o.gamma > 0.0)) throw Error(ErrorCode::InvalidConfig, "--gamma must be > 0");
    if (o.amse_coef == 4) coef = AmseCoefficient::Four;
    else if (o.amse_coef != 2) throw Error(ErrorCode::InvalidConfig, "--amse-coef must be 2 or 4");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  std::ostringstream csv;
  csv << "k,s1,s2,s_dot,s_ddot,s1_limit,s2_limit,amse\n";
  for (Index k = o.k_min; k <= o.k_max; k += o.k_step) {
    const auto m = s_moments(k, rho);
    csv << k << ',' << format_number(m.s1) << ',' << format_number(m.s2) << ','
        << format_number(m.s_dot) << ',' << format_number(m.s_ddot) << ','
        << format_number(m.s1_limit) << ',' << format_number(m.s2_limit) << ','
        << format_number(amse(o.gamma, k, rho, coef)) << '\n';
  }
  auto meta = base_metadata(args);
  meta["rho"] = format_number(rho);
  meta["gamma"] = format_number(o.gamma);
  meta["amse_coefficient"] = std::to_string(o.amse_coef);
  try {
    emit(o.out, csv.str(), std::move(meta), out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

int cmd_optimal_k(const std::string& path, const std::string& estimator, std::ostream& out,
                  std::ostream& err) {
  std::vector<SummaryRow> rows;
  {
    std::ifstream in(path);
    if (!in) {
      err << "error: cannot open " << path << '\n';
      return kParseError;
    }
    try {
      rows = read_summary_csv(in);
    } catch (const ParseError& e) {
      err << path << ": " << e.what() << '\n';
      return kParseError;
    }
  }
  std::vector<std::pair<Index, double>> mse_by_k;
  for (const auto& r : rows) {
    if (r.estimator == estimator && !std::isnan(r.mse)) mse_by_k.emplace_back(r.k, r.mse);
  }
  if (mse_by_k.empty()) {
    err << "error: estimator " << estimator << " not found in " << path << '\n';
    return kLookupError;
  }
  Index k0 = 0;
  try {
    k0 = optimal_k(mse_by_k);
  } catch (const Error& e) {
    err << path << ": " << e.what() << '\n';
    return kParseError;
  }
  double mse = 0.0;
  for (const auto& [k, m] : mse_by_k) {
    if (k == k0) {
      mse = m;
      break;
    }
  }
  out << "estimator,k0,mse\n" << estimator << ',' << k0 << ',' << format_number(mse) << '\n';
  return kOk;
}

void cmd_fetch_note(std::ostream& out) {
  out << "The practical datasets are not bundled. Source: " << kDataUrl << '\n'
      << "  secura   Secura Belgian reinsurance claim sizes, expected 371 rows\n"
      << "  condroz  Condroz soil calcium content (mg/100g), expected 1505 rows\n"
      << "Save one value per line (or a delimited file) and pass it to `wlsevi estimate --data`.\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reduced-bias weighted least squares estimation of the extreme value index"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Estimate gamma over k for a dataset");
  estimate->add_option("--data", est.data, "Input file")->required();
  estimate->add_option("--column", est.column, "Column: 1-based index or header name");
  estimate->add_option("--delimiter", est.delimiter, "Field delimiter (',', ';', tab, space)");
  estimate->add_option("--header", est.header, "auto|yes|no");
  estimate->add_option("--estimators", est.estimators, "Comma list of HILL,BCHILL,LS,RR,WLS or all");
  estimate->add_option("--rho", est.rho, "fixed:<v>|moment|minvar");
  estimate->add_option("--k", est.k, "Single tail fraction");
  estimate->add_option("--k-min", est.k_min, "Smallest k (default min(5, n-1))");
  estimate->add_option("--k-max", est.k_max, "Largest k (default n-1)");
  estimate->add_option("--out", est.out, "Output CSV (stdout when omitted)");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo bias/MSE study");
  simulate->add_option("--dist", sim.dist, "pareto|burr|frechet|loggamma")->required();
  simulate->add_option("--gamma", sim.gamma, "Pareto extreme value index");
  simulate->add_option("--eta", sim.eta, "Burr scale (default 1)");
  simulate->add_option("--tau", sim.tau, "Burr tau");
  simulate->add_option("--lambda", sim.lambda, "Burr / Log-Gamma lambda");
  simulate->add_option("--alpha", sim.alpha, "Frechet / Log-Gamma alpha");
  simulate->add_option("--n", sim.n, "Sample size");
  simulate->add_option("--reps", sim.reps, "Replications");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--k-min", sim.k_min, "Smallest k (default 5)");
  simulate->add_option("--k-max", sim.k_max, "Largest k (default n-1)");
  simulate->add_option("--k-step", sim.k_step, "Evaluate every k-step-th k");
  simulate->add_option("--estimators", sim.estimators, "Comma list of HILL,BCHILL,LS,RR,WLS or all");
  simulate->add_option("--rho", sim.rho, "fixed:<v>|moment|minvar");
  simulate->add_option("--out", sim.out, "Summary CSV path");
  simulate->add_option("--threads", sim.threads, "Worker threads (0: all cores)");

  DiagnoseOptions diag;
  auto* diagnose = app.add_subcommand("diagnose", "Finite-k S-moments, limits and AMSE");
  diagnose->add_option("--rho", diag.rho, "Second-order parameter (< 0)")->required();
  diagnose->add_option("--k-min", diag.k_min, "Smallest k (default 2)");
  diagnose->add_option("--k-max", diag.k_max, "Largest k (default 100)");
  diagnose->add_option("--k-step", diag.k_step, "Step between k values");
  diagnose->add_option("--gamma", diag.gamma, "gamma used in the AMSE column");
  diagnose->add_option("--amse-coef", diag.amse_coef, "Coefficient on s1*s_dot/s2 (2 or 4)");
  diagnose->add_option("--out", diag.out, "Output CSV (stdout when omitted)");

  std::string summary_path, estimator_name = "WLS";
  auto* optk = app.add_subcommand("optimal-k", "argmin_k MSE from a summary file");
  optk->add_option("--summary", summary_path, "summary.csv path")->required();
  optk->add_option("--estimator", estimator_name, "Estimator column to minimize");

  auto* note = app.add_subcommand("fetch-note", "Where to obtain the practical datasets");

  std::vector<const char*> argv{"wlsevi"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (estimate->parsed()) return cmd_estimate(est, args, out, err);
  if (simulate->parsed()) return cmd_simulate(sim, args, out, err);
  if (diagnose->parsed()) return cmd_diagnose(diag, args, out, err);
  if (optk->parsed()) return cmd_optimal_k(summary_path, estimator_name, out, err);
  if (note->parsed()) {
    cmd_fetch_note(out);
    return kOk;
  }
  return kConfigError;
}

}  // namespace wlsevi::cli
