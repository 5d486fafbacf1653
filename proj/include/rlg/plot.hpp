#pragma once

#include "rlg/error.hpp"
#include "rlg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rlg {

struct PlotOptions {
  std::string x_column = "k";
  std::string y_column = "ratio_R";
  std::string series_column = "n";
  /// Keep only rows whose "method" column equals this value (when set).
  std::optional<std::string> method;
  bool log_x = false;
  int width = 640;
  int height = 400;
};

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // sorted by x
};

namespace detail {

inline std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::string fixed(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

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

}  // namespace detail

/// Groups rows by the series column; rows with an empty or non-numeric x or y
/// are dropped, and for a repeated x within a series the first row wins.
inline std::vector<PlotSeries> collect_series(const CsvTable& table, const PlotOptions& opt) {
  if (table.header.empty()) fail(ErrorCode::EmptyInput, "CSV has no header");
  const std::size_t xc = table.column(opt.x_column);
  const std::size_t yc = table.column(opt.y_column);
  std::optional<std::size_t> sc;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == opt.series_column) sc = i;
  }
  std::optional<std::size_t> mc;
  if (opt.method) mc = table.column("method");
  if (table.rows.empty()) fail(ErrorCode::EmptyInput, "CSV has no data rows");

  std::map<std::pair<double, std::string>, std::map<double, double>> grouped;
  for (const auto& row : table.rows) {
    auto field = [&](std::size_t i) { return i < row.size() ? row[i] : std::string(); };
    if (mc && field(*mc) != *opt.method) continue;
    const auto x = detail::parse_number(field(xc));
    const auto y = detail::parse_number(field(yc));
    if (!x || !y || (opt.log_x && *x <= 0.0)) continue;
    const std::string label = sc ? field(*sc) : std::string();
    const double order = sc ? detail::parse_number(label).value_or(0.0) : 0.0;
    grouped[{order, label}].emplace(*x, *y);
  }
  std::vector<PlotSeries> out;
  for (const auto& [key, pts] : grouped) {
    PlotSeries s;
    s.label = key.second;
    s.points.assign(pts.begin(), pts.end());
    out.push_back(std::move(s));
  }
  return out;
}

inline std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& opt) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  const double left = 60, right = 20, top = 20, bottom = 50;
  const double w = opt.width, h = opt.height;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  auto tx = [&](double x) { return opt.log_x ? std::log10(x) : x; };
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, tx(x));
      xmax = std::max(xmax, tx(x));
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmin <= xmax)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto px = [&](double x) { return left + (tx(x) - xmin) / (xmax - xmin) * (w - left - right); };
  auto py = [&](double y) { return h - bottom - (y - ymin) / (ymax - ymin) * (h - top - bottom); };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
         std::to_string(opt.height) + "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
         std::to_string(opt.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + detail::fixed(left) + "\" y1=\"" + detail::fixed(h - bottom) + "\" x2=\"" +
         detail::fixed(w - right) + "\" y2=\"" + detail::fixed(h - bottom) + "\"/>\n";
  svg += "<line x1=\"" + detail::fixed(left) + "\" y1=\"" + detail::fixed(top) + "\" x2=\"" + detail::fixed(left) +
         "\" y2=\"" + detail::fixed(h - bottom) + "\"/>\n";
  svg += "</g>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  auto label = [&](double x, double y, const std::string& text, const char* anchor) {
    svg += "<text x=\"" + detail::fixed(x) + "\" y=\"" + detail::fixed(y) + "\" text-anchor=\"" + anchor + "\">" +
           detail::xml_escape(text) + "</text>\n";
  };
  const double xlo = opt.log_x ? std::pow(10.0, xmin) : xmin;
  const double xhi = opt.log_x ? std::pow(10.0, xmax) : xmax;
  label(left, h - bottom + 15, format_double_short(xlo), "middle");
  label(w - right, h - bottom + 15, format_double_short(xhi), "middle");
  label(left - 5, h - bottom, format_double_short(ymin), "end");
  label(left - 5, top + 4, format_double_short(ymax), "end");
  label((left + w - right) / 2, h - 10, opt.x_column + (opt.log_x ? " (log)" : ""), "middle");
  label(12, top - 6, opt.y_column, "start");
  svg += "</g>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* colour = palette[i % (sizeof palette / sizeof *palette)];
    std::string pts;
    for (const auto& [x, y] : s.points) {
      if (!pts.empty()) pts += ' ';
      pts += detail::fixed(px(x)) + "," + detail::fixed(py(y));
    }
    svg += "<polyline data-series=\"" + detail::xml_escape(s.label) + "\" fill=\"none\" stroke=\"" + colour +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    svg += "<text x=\"" + detail::fixed(w - right - 5) + "\" y=\"" + detail::fixed(top + 14.0 * (i + 1)) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" fill=\"" + colour + "\">" +
           detail::xml_escape(opt.series_column + "=" + s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

inline std::string plot_csv_text(const std::string& csv_text, const PlotOptions& opt) {
  const CsvTable table = parse_csv(csv_text);
  return render_svg(collect_series(table, opt), opt);
}

inline void emit_plot(const std::string& csv_path, const std::string& out_svg, const PlotOptions& opt) {
  write_file(out_svg, plot_csv_text(read_file(csv_path), opt));
}

}  // namespace rlg
