#pragma once

// Static SVG line chart of S, I, R against t, optionally with a second panel
// for H_rel_drift. Output depends only on the table contents.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sirmech/io/csv.hpp"

namespace sirmech::io {

struct PlotOptions {
  bool drift_panel = false;
  int width = 800;
  int panel_height = 360;
  int drift_height = 200;
};

namespace detail {

inline std::string fmt(double v, int digits = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Panel {
  double left, top, width, height;
  double x_min, x_max, y_min, y_max;

  double x(double v) const {
    return x_max > x_min ? left + (v - x_min) / (x_max - x_min) * width : left + 0.5 * width;
  }
  double y(double v) const {
    return y_max > y_min ? top + height - (v - y_min) / (y_max - y_min) * height : top + 0.5 * height;
  }
};

inline void draw_axes(std::string& svg, const Panel& p, const std::string& y_title) {
  svg += "<rect x=\"" + fmt(p.left) + "\" y=\"" + fmt(p.top) + "\" width=\"" + fmt(p.width) + "\" height=\"" +
         fmt(p.height) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = p.x_min + (p.x_max - p.x_min) * k / 4.0;
    const double yv = p.y_min + (p.y_max - p.y_min) * k / 4.0;
    const double xs = p.x(xv);
    const double ys = p.y(yv);
    svg += "<line x1=\"" + fmt(xs) + "\" y1=\"" + fmt(p.top + p.height) + "\" x2=\"" + fmt(xs) + "\" y2=\"" +
           fmt(p.top + p.height + 5) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(xs) + "\" y=\"" + fmt(p.top + p.height + 18) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + tick_label(xv) + "</text>\n";
    svg += "<line x1=\"" + fmt(p.left - 5) + "\" y1=\"" + fmt(ys) + "\" x2=\"" + fmt(p.left) + "\" y2=\"" + fmt(ys) +
           "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(p.left - 8) + "\" y=\"" + fmt(ys + 4) + "\" font-size=\"11\" text-anchor=\"end\">" +
           tick_label(yv) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(p.left + 0.5 * p.width) + "\" y=\"" + fmt(p.top + p.height + 34) +
         "\" font-size=\"12\" text-anchor=\"middle\">t</text>\n";
  svg += "<text x=\"" + fmt(p.left - 52) + "\" y=\"" + fmt(p.top + 0.5 * p.height) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " + fmt(p.left - 52) + " " +
         fmt(p.top + 0.5 * p.height) + ")\">" + y_title + "</text>\n";
}

inline void draw_series(std::string& svg, const Panel& p, const std::vector<double>& xs,
                        const std::vector<double>& ys, const std::string& color) {
  if (xs.size() == 1) {
    svg += "<circle cx=\"" + fmt(p.x(xs[0])) + "\" cy=\"" + fmt(p.y(ys[0])) + "\" r=\"4\" fill=\"" + color +
           "\"/>\n";
    return;
  }
  svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) svg += ' ';
    svg += fmt(p.x(xs[k])) + ',' + fmt(p.y(ys[k]));
  }
  svg += "\"/>\n";
}

inline std::vector<double> column_values(const CsvTable& table, const std::string& name) {
  const std::size_t c = table.column(name);
  std::vector<double> v;
  v.reserve(table.rows.size());
  for (const auto& row : table.rows) v.push_back(row[c]);
  return v;
}

}  // namespace detail

inline std::string render_svg(const CsvTable& table, const PlotOptions& options = {}) {
  using detail::fmt;
  const auto t = detail::column_values(table, "t");
  const auto s = detail::column_values(table, "S");
  const auto i = detail::column_values(table, "I");
  const auto r = detail::column_values(table, "R");
  for (const auto* col : {&t, &s, &i, &r})
    for (double v : *col)
      if (!std::isfinite(v)) throw Error(ErrorKind::Config, "CSV contains non-finite values");

  const double margin_left = 70, margin_top = 30, margin_bottom = 50;
  const double inner_width = options.width - margin_left - 130;
  const double total_height = margin_top + options.panel_height + margin_bottom +
                              (options.drift_panel ? options.drift_height + margin_bottom : 0.0);
  const auto [t_lo, t_hi] = std::minmax_element(t.begin(), t.end());

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(options.width) + "\" height=\"" +
         fmt(total_height, 0) + "\" viewBox=\"0 0 " + std::to_string(options.width) + " " + fmt(total_height, 0) +
         "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const detail::Panel main{margin_left, margin_top, inner_width, double(options.panel_height), *t_lo, *t_hi, 0.0,
                           1.0};
  detail::draw_axes(svg, main, "fraction");
  const char* names[] = {"S", "I", "R"};
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c"};
  const std::vector<double>* series[] = {&s, &i, &r};
  for (int k = 0; k < 3; ++k) {
    detail::draw_series(svg, main, t, *series[k], colors[k]);
    const double ly = margin_top + 20.0 + 20.0 * k;
    const double lx = margin_left + inner_width + 20.0;
    svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 24) + "\" y2=\"" + fmt(ly) +
           "\" stroke=\"" + colors[k] + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(ly + 4) + "\" font-size=\"12\">" + names[k] + "</text>\n";
  }

  if (options.drift_panel) {
    const auto drift = detail::column_values(table, "H_rel_drift");
    for (double v : drift)
      if (!std::isfinite(v)) throw Error(ErrorKind::Config, "CSV contains non-finite values");
    const auto [d_lo, d_hi] = std::minmax_element(drift.begin(), drift.end());
    const double top = margin_top + options.panel_height + margin_bottom;
    const detail::Panel panel{margin_left, top, inner_width, double(options.drift_height), *t_lo, *t_hi,
                              std::min(*d_lo, 0.0), std::max(*d_hi, 0.0)};
    detail::draw_axes(svg, panel, "H drift");
    detail::draw_series(svg, panel, t, drift, "#9467bd");
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sirmech::io
