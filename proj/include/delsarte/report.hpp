// Copyright 2026 The delsarte-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace delsarte {

/// One check of a scenario. Checks whose id ends in "_min" are lower bounds
/// (pass when residual >= threshold); all others pass when residual <= threshold.
struct ReportRow {
  std::string scenario;
  std::string check;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string grid;
  double ms = 0.0;

  static bool lower_bound(const std::string& check) {
    return check.size() >= 4 && check.compare(check.size() - 4, 4, "_min") == 0;
  }
  static ReportRow make(std::string scenario, std::string check, double residual, double threshold, std::string grid,
                        double ms = 0.0) {
    const bool lb = lower_bound(check);
    const bool ok = std::isfinite(residual) ? (lb ? residual >= threshold : residual <= threshold)
                                            : (lb && residual > 0);
    return {std::move(scenario), std::move(check), residual, threshold, ok, std::move(grid), ms};
  }
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

// RFC 4180 quoting for fields holding commas or quotes.
inline std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline const char* csv_header() { return "scenario,check,residual,threshold,pass,grid,ms"; }

inline std::string to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << csv_header() << "\n";
  for (const auto& r : rows) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.0f", r.ms);
    os << csv_field(r.scenario) << "," << csv_field(r.check) << "," << format_number(r.residual) << "," << format_number(r.threshold) << ","
       << (r.pass ? "true" : "false") << "," << csv_field(r.grid) << "," << ms << "\n";
  }
  return os.str();
}

inline nlohmann::json to_json(const std::vector<ReportRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows)
    out.push_back({{"scenario", r.scenario},
                   {"check", r.check},
                   {"residual", format_number(r.residual)},
                   {"threshold", format_number(r.threshold)},
                   {"pass", r.pass},
                   {"grid", r.grid},
                   {"ms", r.ms}});
  return out;
}

/// Line plot with one or more series, written as a standalone SVG.
struct Plot {
  struct Series {
    std::string name;
    std::vector<double> x, y;
  };
  std::string title, xlabel, ylabel;
  std::vector<Series> series;
  bool log_y = false;
};

inline std::string to_svg(const Plot& plot) {
  const double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto ty = [&](double y) { return plot.log_y ? std::log10(std::max(std::abs(y), 1e-300)) : y; };
  for (const auto& s : plot.series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]), x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i])), y1 = std::max(y1, ty(s.y[i]));
    }
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (ty(y) - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream os;
  char buf[64];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
     << plot.title << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + k * (x1 - x0) / 4, yv = y0 + k * (y1 - y0) / 4;
    std::snprintf(buf, sizeof buf, "%.3g", xv);
    os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, plot.log_y ? "1e%.1f" : "%.3g", yv);
    const double ypix = H - B - k * (H - T - B) / 4;
    os << "<text x=\"" << L - 6 << "\" y=\"" << ypix + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << buf << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << plot.xlabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << plot.ylabel << "</text>\n";
  for (size_t s = 0; s < plot.series.size(); ++s) {
    const auto& ser = plot.series[s];
    os << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colors[s % 5] << "\" points=\"";
    for (size_t i = 0; i < ser.x.size(); ++i) {
      if (!std::isfinite(ser.y[i])) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(ser.x[i]), py(ser.y[i]));
      os << buf;
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - R - 8 << "\" y=\"" << T + 16 + 16 * s << "\" text-anchor=\"end\" fill=\"" << colors[s % 5]
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << ser.name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace delsarte
