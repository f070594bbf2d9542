// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

// Command-line front end: dataset ingestion, CSV/metadata writers and the
// estimate / simulate / diagnose / optimal-k / fetch-note subcommands.
//
// Exit codes: 0 success, 2 input parse, 3 estimation, 4 config, 5 lookup.

#ifndef WLSEVI_CLI_HPP
#define WLSEVI_CLI_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlsevi/estimators.hpp"
#include "wlsevi/montecarlo.hpp"

namespace wlsevi::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kEstimationError = 3,
  kConfigError = 4,
  kLookupError = 5,
};

/// An input file problem; line is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct DatasetOptions {
  std::string column;               // empty: first numeric column; digits: 1-based; else header name
  std::string delimiter = ",";      // "," ";" "\t" or " " (any run of blanks)
  std::optional<bool> header;       // nullopt: detected from the first non-comment line
};

struct Dataset {
  std::vector<double> values;
  std::vector<std::size_t> lines;  // source line of each value
  std::string column;              // resolved column label
};

/// Reads one numeric column. Lines starting with '#' and blank lines are
/// skipped. Every value must be finite and > 0.
Dataset read_dataset(std::istream& in, const DatasetOptions& options = {});

/// 17 significant digits; "NA" for NaN.
std::string format_number(double x);

void write_path_csv(std::ostream& out, const std::vector<EviPath>& paths);
void write_summary_csv(std::ostream& out, const SimulationSummary& summary);

struct SummaryRow {
  std::string estimator;
  Index k;
  double mean, bias, mse, variance;
  Index missing;
};

std::vector<SummaryRow> read_summary_csv(std::istream& in);

/// key=value per line, keys in sorted order.
void write_metadata(std::ostream& out, const std::map<std::string, std::string>& metadata);

/// Writes to a sibling temporary file and renames it over path.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wlsevi::cli

#endif  // WLSEVI_CLI_HPP
