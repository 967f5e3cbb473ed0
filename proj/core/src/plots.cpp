/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#include "solgen/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace solgen {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* kSeriesColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<PlotSeries>& series, bool scatter) {
  const int width = 640, height = 420;
  const int ml = 70, mr = 20, mt = 40, mb = 50;

  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto sx = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
  };
  auto sy = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  nlohmann::json data = nlohmann::json::array();
  for (const auto& s : series) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [x, y] : s.points) pts.push_back({x, y});
    data.push_back({{"name", s.name}, {"points", pts}});
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_line_plot_svg: cannot open " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<desc>" << data.dump() << "</desc>\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " << height / 2
      << ")\">" << y_label << "</text>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
      << "\" height=\"" << height - mt - mb
      << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";

  // axis ticks
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    out << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << height - mb + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(xv) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << fmt(sy(yv) + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(yv) << "</text>\n";
  }

  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = kSeriesColors[si % 8];
    if (scatter) {
      for (const auto& [x, y] : series[si].points) {
        out << "<circle cx=\"" << fmt(sx(x)) << "\" cy=\"" << fmt(sy(y))
            << "\" r=\"2.5\" fill=\"" << color << "\" fill-opacity=\"0.7\"/>\n";
      }
    } else if (!series[si].points.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : series[si].points) {
        out << fmt(sx(x)) << "," << fmt(sy(y)) << " ";
      }
      out << "\"/>\n";
    }
    out << "<text x=\"" << width - mr - 8 << "\" y=\"" << mt + 16 + 14 * static_cast<int>(si)
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">"
        << series[si].name << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write_line_plot_svg: write failed for " + path);
}

}  // namespace solgen
