#pragma once

// Tabular results: rows of (point, method) evaluations, CSV/JSON emission and
// parsing, plus the flat key=value config format used by the CLI.

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "loggas/errors.hpp"

namespace loggas::report {

inline constexpr std::string_view kCsvHeader = "s,v,kappa,method,log_det,error_bound,regime,flags";

struct Row {
  double s = 0.0;
  double v = 0.0;
  double kappa = 0.0;
  std::string method;
  std::optional<double> log_det;  // empty for error rows
  std::optional<double> error_bound;
  std::string regime;
  std::vector<std::string> flags;  // error rows carry "error:<kind>" or "n/a:<kind>"
  std::string message;             // not part of the CSV

  bool is_error() const {
    for (const auto& f : flags)
      if (f.starts_with("error:")) return true;
    return false;
  }
  bool is_na() const {
    for (const auto& f : flags)
      if (f.starts_with("n/a:")) return true;
    return false;
  }

  friend bool operator==(const Row& a, const Row& b) {
    return a.s == b.s && a.v == b.v && a.kappa == b.kappa && a.method == b.method && a.log_det == b.log_det &&
           a.error_bound == b.error_bound && a.regime == b.regime && a.flags == b.flags;
  }
};

struct RunReport {
  std::map<std::string, std::string> meta;
  std::vector<Row> rows;

  std::size_t flagged_rows() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += (r.is_error() || r.is_na()) ? 1 : 0;
    return n;
  }
};

inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_number(std::string_view text) {
  const std::string s(text);
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    throw InvalidArgument("not a number: '" + s + "'");
  return x;
}

namespace detail {

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::string opt_number(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

}  // namespace detail

/// CSV with optional leading "# key=value" metadata lines. Metadata passed in
/// should be deterministic; write_csv does not add any.
inline void write_csv(std::ostream& os, const RunReport& rep, bool with_meta = true) {
  if (with_meta)
    for (const auto& [k, v] : rep.meta) os << "# " << k << '=' << v << '\n';
  os << kCsvHeader << '\n';
  for (const auto& r : rep.rows) {
    os << format_number(r.s) << ',' << format_number(r.v) << ',' << format_number(r.kappa) << ',' << r.method << ','
       << detail::opt_number(r.log_det) << ',' << detail::opt_number(r.error_bound) << ',' << r.regime << ',';
    for (std::size_t i = 0; i < r.flags.size(); ++i) os << (i ? ";" : "") << r.flags[i];
    os << '\n';
  }
}

inline RunReport read_csv(std::istream& is) {
  RunReport rep;
  std::string line;
  bool header = false;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.starts_with("#")) {
      const auto body = detail::trim(std::string_view(line).substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos) rep.meta[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (!header) {
      if (line != kCsvHeader) throw InvalidArgument("read_csv: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    const auto cells = detail::split(line, ',');
    if (cells.size() != 8) throw InvalidArgument("read_csv: line " + std::to_string(lineno) + " has wrong cell count");
    Row r;
    r.s = parse_number(cells[0]);
    r.v = parse_number(cells[1]);
    r.kappa = parse_number(cells[2]);
    r.method = cells[3];
    if (!cells[4].empty()) r.log_det = parse_number(cells[4]);
    if (!cells[5].empty()) r.error_bound = parse_number(cells[5]);
    r.regime = cells[6];
    if (!cells[7].empty()) r.flags = detail::split(cells[7], ';');
    rep.rows.push_back(std::move(r));
  }
  if (!header) throw InvalidArgument("read_csv: missing header");
  return rep;
}

inline nlohmann::json to_json(const RunReport& rep) {
  nlohmann::json j;
  j["meta"] = nlohmann::json::object();
  for (const auto& [k, v] : rep.meta) j["meta"][k] = v;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    nlohmann::json row = {{"s", r.s}, {"v", r.v}, {"kappa", r.kappa}, {"method", r.method}, {"regime", r.regime},
                          {"flags", r.flags}};
    row["log_det"] = r.log_det ? nlohmann::json(*r.log_det) : nlohmann::json(nullptr);
    row["error_bound"] = r.error_bound ? nlohmann::json(*r.error_bound) : nlohmann::json(nullptr);
    if (!r.message.empty()) row["message"] = r.message;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

/// Aligned plain-text table.
inline void write_table(std::ostream& os, const RunReport& rep) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"method", "s", "v", "kappa", "log_det", "error_bound", "regime", "flags"});
  for (const auto& r : rep.rows) {
    std::string flags;
    for (std::size_t i = 0; i < r.flags.size(); ++i) flags += (i ? ";" : "") + r.flags[i];
    if (!r.message.empty()) flags += (flags.empty() ? "" : " ") + ("(" + r.message + ")");
    auto num = [](double x) {
      std::ostringstream o;
      o << std::setprecision(12) << x;
      return o.str();
    };
    cells.push_back({r.method, num(r.s), num(r.v), num(r.kappa), r.log_det ? num(*r.log_det) : "-",
                     r.error_bound ? num(*r.error_bound) : "-", r.regime.empty() ? "-" : r.regime, flags});
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c + 1 < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << row[c];
      if (c + 1 < row.size()) os << std::string(width[c] - row[c].size() + 2, ' ');
    }
    os << '\n';
  }
}

/// Flat key=value config. '#' starts a comment line; blank lines skipped;
/// keys may be written with or without leading dashes.
inline std::map<std::string, std::string> parse_config(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key=value");
    auto key = detail::trim(std::string_view(t).substr(0, eq));
    while (key.starts_with("-")) key.erase(0, 1);
    if (key.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
    out[key] = detail::trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

inline std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open config file '" + path + "'");
  return parse_config(f);
}

}  // namespace loggas::report
