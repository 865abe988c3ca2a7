#pragma once

// Minimal line plots as standalone SVG 1.1 text. One polyline plus markers
// per series, decade ticks on log axes, a legend box in the top right.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "apint/harness/csv.hpp"

namespace apint::harness {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_column;
  std::vector<std::string> y_columns;
  // When set, rows are grouped by this column and y_columns must hold one
  // entry; otherwise every y column becomes its own series.
  std::string series_column = "epsilon";
  std::string series_prefix = "ε = ";
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string svg_num(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

inline std::string tick_label(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

struct Axis {
  double lo = 0.0, hi = 1.0;  // in transformed (log10 if log) units
  bool log = false;

  double transform(double v) const { return log ? std::log10(v) : v; }

  static Axis fit(const std::vector<double>& values, bool log) {
    Axis a;
    a.log = log;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : values) {
      lo = std::min(lo, a.transform(v));
      hi = std::max(hi, a.transform(v));
    }
    if (values.empty()) {
      lo = log ? -1.0 : 0.0;
      hi = log ? 1.0 : 1.0;
    }
    if (hi - lo < 1e-12) {
      const double pad = log ? 0.5 : std::max(1.0, 0.1 * std::abs(lo));
      lo -= pad;
      hi += pad;
    }
    if (log) {
      lo = std::floor(lo);
      hi = std::ceil(hi);
    } else {
      const double span = hi - lo;
      lo -= 0.05 * span;
      hi += 0.05 * span;
    }
    a.lo = lo;
    a.hi = hi;
    return a;
  }

  // Tick positions in data units.
  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int first = static_cast<int>(std::ceil(lo - 1e-9));
      const int last = static_cast<int>(std::floor(hi + 1e-9));
      const int stride = std::max(1, (last - first) / 8 + 1);
      for (int e = first; e <= last; e += stride) out.push_back(std::pow(10.0, e));
      return out;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
      out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return out;
  }
};

inline bool plottable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

}  // namespace detail

inline std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  constexpr double width = 640, height = 420;
  constexpr double left = 80, right = 20, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  std::vector<double> xs, ys;
  std::size_t total = 0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!detail::plottable(x, spec.log_x) || !detail::plottable(y, spec.log_y)) continue;
      xs.push_back(x);
      ys.push_back(y);
      ++total;
    }
  const auto ax = detail::Axis::fit(xs, spec.log_x);
  const auto ay = detail::Axis::fit(ys, spec.log_y);
  auto px = [&](double x) { return left + (ax.transform(x) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double y) { return top + ph - (ay.transform(y) - ay.lo) / (ay.hi - ay.lo) * ph; };
  using detail::svg_num;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    os << "<text class=\"title\" x=\"" << svg_num(width / 2) << "\" y=\"24\" text-anchor=\"middle\""
       << " font-family=\"sans-serif\" font-size=\"15\">" << detail::xml_escape(spec.title)
       << "</text>\n";

  os << "<line class=\"axis\" x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw
     << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
  os << "<line class=\"axis\" x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
     << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
  for (double t : ax.ticks()) {
    const double x = px(t);
    os << "<line class=\"tick\" x1=\"" << svg_num(x) << "\" y1=\"" << top + ph << "\" x2=\""
       << svg_num(x) << "\" y2=\"" << top + ph + 5 << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << svg_num(x) << "\" y=\"" << top + ph + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << detail::tick_label(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    os << "<line class=\"tick\" x1=\"" << left - 5 << "\" y1=\"" << svg_num(y) << "\" x2=\""
       << left << "\" y2=\"" << svg_num(y) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << left - 8 << "\" y=\"" << svg_num(y + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << detail::tick_label(t) << "</text>\n";
  }
  os << "<text class=\"xlabel\" x=\"" << svg_num(left + pw / 2) << "\" y=\"" << height - 15
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
     << detail::xml_escape(spec.x_label) << "</text>\n";
  os << "<text class=\"ylabel\" x=\"18\" y=\"" << svg_num(top + ph / 2)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
     << svg_num(top + ph / 2) << ")\">" << detail::xml_escape(spec.y_label) << "</text>\n";

  if (total == 0) {
    os << "<text class=\"nodata\" x=\"" << svg_num(left + pw / 2) << "\" y=\""
       << svg_num(top + ph / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\" fill=\"gray\">"
       << "no data</text>\n";
  }

  int legend_row = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = palette[i % std::size(palette)];
    std::vector<std::pair<double, double>> pts;
    for (const auto& [x, y] : series[i].points)
      if (detail::plottable(x, spec.log_x) && detail::plottable(y, spec.log_y))
        pts.emplace_back(px(x), py(y));
    if (pts.size() >= 2) {
      os << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t j = 0; j < pts.size(); ++j)
        os << (j ? " " : "") << svg_num(pts[j].first) << ',' << svg_num(pts[j].second);
      os << "\"/>\n";
    }
    for (const auto& [x, y] : pts)
      os << "<circle class=\"marker\" cx=\"" << svg_num(x) << "\" cy=\"" << svg_num(y)
         << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    if (series[i].label.empty()) continue;
    const double ly = top + 12 + 16 * legend_row++;
    os << "<line x1=\"" << left + pw - 110 << "\" y1=\"" << svg_num(ly - 4) << "\" x2=\""
       << left + pw - 90 << "\" y2=\"" << svg_num(ly - 4) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n"
       << "<text class=\"legend\" x=\"" << left + pw - 84 << "\" y=\"" << svg_num(ly)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << detail::xml_escape(series[i].label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// Groups table rows into series following spec. Missing columns throw.
inline std::vector<PlotSeries> series_from_table(const CsvTable& table, const PlotSpec& spec) {
  if (spec.y_columns.empty()) throw std::invalid_argument("plot needs at least one y column");
  table.column(spec.x_column);
  for (const auto& y : spec.y_columns) table.column(y);
  std::vector<PlotSeries> out;
  if (!spec.series_column.empty()) {
    if (spec.y_columns.size() != 1)
      throw std::invalid_argument("grouped plots take exactly one y column");
    table.column(spec.series_column);
    std::map<std::string, std::size_t> index;  // first-appearance order kept via out
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const std::string& key = table.text(r, spec.series_column);
      auto [it, fresh] = index.emplace(key, out.size());
      if (fresh) out.push_back({spec.series_prefix + key, {}});
      out[it->second].points.emplace_back(table.number(r, spec.x_column),
                                          table.number(r, spec.y_columns[0]));
    }
    return out;
  }
  for (const auto& y : spec.y_columns) {
    PlotSeries s{y, {}};
    for (std::size_t r = 0; r < table.rows.size(); ++r)
      s.points.emplace_back(table.number(r, spec.x_column), table.number(r, y));
    out.push_back(std::move(s));
  }
  return out;
}

inline void emit_plot(const std::string& csv_path, const PlotSpec& spec,
                      const std::string& svg_path) {
  const auto table = read_csv(csv_path);
  const auto svg = render_svg(spec, series_from_table(table, spec));
  std::ofstream out(svg_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + svg_path);
  out << svg;
}

}  // namespace apint::harness
