// Copyright 2026 The wlsevi Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include <unistd.h>

#include "wlsevi/cli.hpp"

namespace wlsevi::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view line, std::string_view delimiter) {
  std::vector<std::string_view> fields;
  if (delimiter == " ") {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      fields.push_back(line.substr(i, j - i));
      i = j;
    }
    return fields;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + delimiter.size();
  }
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Dataset read_dataset(std::istream& in, const DatasetOptions& options) {
  if (options.delimiter.empty()) throw ParseError(0, "empty delimiter");

  Dataset data;
  std::string raw;
  std::size_t line_no = 0;
  bool first_row = true;
  std::optional<std::size_t> column;  // 0-based
  std::vector<std::string> header;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    const std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;

    const auto fields = split(line, options.delimiter);
    if (first_row) {
      first_row = false;
      const bool any_numeric = std::any_of(fields.begin(), fields.end(),
                                           [](std::string_view f) { return to_number(f).has_value(); });
      const bool is_header = options.header.value_or(!any_numeric);

      if (options.column.empty()) {
        if (!is_header) {
          for (std::size_t i = 0; i < fields.size(); ++i) {
            if (to_number(fields[i])) {
              column = i;
              break;
            }
          }
          if (!column) throw ParseError(line_no, "no numeric column found");
        }
      } else if (all_digits(options.column)) {
        const auto idx = std::stoul(options.column);
        if (idx == 0) throw ParseError(0, "column index is 1-based");
        column = idx - 1;
      } else {
        if (!is_header) throw ParseError(line_no, "column '" + options.column + "' needs a header row");
        const auto it = std::find_if(fields.begin(), fields.end(), [&](std::string_view f) {
          return trim(f) == options.column;
        });
        if (it == fields.end()) throw ParseError(line_no, "no column named '" + options.column + "'");
        column = static_cast<std::size_t>(it - fields.begin());
      }
      if (is_header) {
        for (auto f : fields) header.emplace_back(trim(f));
        continue;
      }
    }
    if (!column) {
      // Header present, no column requested: take the first numeric field.
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (to_number(fields[i])) {
          column = i;
          break;
        }
      }
      if (!column) throw ParseError(line_no, "no numeric column found");
    }
    if (data.column.empty()) {
      data.column = *column < header.size() ? header[*column] : std::to_string(*column + 1);
    }

    if (*column >= fields.size()) {
      throw ParseError(line_no, "missing column " + std::to_string(*column + 1));
    }
    const auto value = to_number(fields[*column]);
    if (!value) {
      throw ParseError(line_no, "not a number: '" + std::string(trim(fields[*column])) + "'");
    }
    if (!std::isfinite(*value)) throw ParseError(line_no, "non-finite value");
    if (!(*value > 0.0)) {
      throw ParseError(line_no, "non-positive value " + format_number(*value));
    }
    data.values.push_back(*value);
    data.lines.push_back(line_no);
  }
  if (data.values.size() < 2) {
    throw ParseError(0, "need at least 2 values, found " + std::to_string(data.values.size()));
  }
  return data;
}

void write_path_csv(std::ostream& out, const std::vector<EviPath>& paths) {
  out << "k,estimator,rho_used,gamma_hat\n";
  if (paths.empty()) return;
  const std::size_t len = paths.front().k_values.size();
  for (std::size_t i = 0; i < len; ++i) {
    for (const auto& path : paths) {
      out << path.k_values[i] << ',' << to_string(path.estimator) << ','
          << format_number(path.rho_used[i]) << ',' << format_number(path.estimates[i]) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const SimulationSummary& summary) {
  out << "estimator,k,mean,bias,mse,variance,missing\n";
  for (const auto& c : summary.cells) {
    out << to_string(c.estimator) << ',' << c.k << ',' << format_number(c.mean) << ','
        << format_number(c.bias) << ',' << format_number(c.mse) << ','
        << format_number(c.variance) << ',' << c.missing << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::vector<SummaryRow> rows;
  bool header_seen = false;
  auto number_or_na = [&](std::string_view f) {
    if (trim(f) == "NA") return std::nan("");
    const auto v = to_number(f);
    if (!v) throw ParseError(line_no, "not a number: '" + std::string(trim(f)) + "'");
    return *v;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    if (!header_seen) {
      if (trim(line) != "estimator,k,mean,bias,mse,variance,missing") {
        throw ParseError(line_no, "expected header estimator,k,mean,bias,mse,variance,missing");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line, ",");
    if (f.size() != 7) throw ParseError(line_no, "expected 7 fields, got " + std::to_string(f.size()));
    SummaryRow row;
    row.estimator = std::string(trim(f[0]));
    const auto k = to_number(f[1]);
    const auto missing = to_number(f[6]);
    if (!k || *k != std::floor(*k)) throw ParseError(line_no, "bad k");
    if (!missing || *missing != std::floor(*missing)) throw ParseError(line_no, "bad missing count");
    row.k = static_cast<Index>(*k);
    row.mean = number_or_na(f[2]);
    row.bias = number_or_na(f[3]);
    row.mse = number_or_na(f[4]);
    row.variance = number_or_na(f[5]);
    row.missing = static_cast<Index>(*missing);
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw ParseError(0, "empty summary file");
  return rows;
}

void write_metadata(std::ostream& out, const std::map<std::string, std::string>& metadata) {
  for (const auto& [key, value] : metadata) out << key << '=' << value << '\n';
}

void write_file_atomically(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << contents;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace wlsevi::cli
