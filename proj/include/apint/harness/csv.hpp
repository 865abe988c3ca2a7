#pragma once

// Sweep tables. Layout:
//
//   # apint-csv v1 experiment=<name> columns=<c1;c2;...>
//   # key=value key=value ...
//   c1,c2,...
//   rows
//
// Cells are preformatted strings; doubles go through format_double so the
// output is byte-stable.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "apint/detail/number_format.hpp"

namespace apint::harness {

inline constexpr const char* csv_schema_tag = "apint-csv v1";

struct CsvTable {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
      throw std::invalid_argument("missing column '" + name + "' in " +
                                  (experiment.empty() ? std::string("table") : experiment));
    return static_cast<std::size_t>(it - columns.begin());
  }

  bool has_column(const std::string& name) const {
    return std::find(columns.begin(), columns.end(), name) != columns.end();
  }

  void add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("row width mismatch");
    rows.push_back(std::move(row));
  }

  // Empty cells and unparsable text read as NaN.
  double number(std::size_t row, const std::string& name) const {
    const std::string& s = rows.at(row).at(column(name));
    if (s.empty()) return std::nan("");
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      return used == s.size() ? v : std::nan("");
    } catch (const std::exception&) {
      return std::nan("");
    }
  }

  const std::string& text(std::size_t row, const std::string& name) const {
    return rows.at(row).at(column(name));
  }
};

inline std::string cell(double v) {
  return std::isnan(v) ? std::string() : apint::detail::format_double(v);
}
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(long v) { return std::to_string(v); }
inline std::string cell(bool v) { return v ? "1" : "0"; }

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

inline std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const CsvTable& table) {
  for (const auto& c : table.columns)
    if (c.find_first_of(",; \n") != std::string::npos)
      throw std::invalid_argument("column name '" + c + "' contains a separator");
  os << "# " << csv_schema_tag << " experiment=" << table.experiment
     << " columns=" << detail::join(table.columns, ';') << '\n';
  os << '#';
  for (const auto& [k, v] : table.params) os << ' ' << k << '=' << v;
  os << '\n';
  os << detail::join(table.columns, ',') << '\n';
  for (const auto& row : table.rows) os << detail::join(row, ',') << '\n';
}

inline void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out, table);
  if (!out) throw std::runtime_error("write failed for " + path);
}

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream words(line.substr(1));
      std::string w;
      while (words >> w) {
        const auto eq = w.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = w.substr(0, eq), value = w.substr(eq + 1);
        if (key == "experiment")
          table.experiment = value;
        else if (key != "columns")
          table.params.emplace_back(key, value);
      }
      continue;
    }
    auto fields = detail::split(line, ',');
    if (!have_header) {
      table.columns = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != table.columns.size())
        throw std::runtime_error("csv row has " + std::to_string(fields.size()) +
                                 " fields, header has " + std::to_string(table.columns.size()));
      table.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw std::runtime_error("csv has no header row");
  return table;
}

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return read_csv(in);
}

}  // namespace apint::harness
