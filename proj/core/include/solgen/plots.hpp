/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The SolGen Authors.
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace solgen {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

// Dependency-free SVG line/scatter plots. The raw series data is embedded in
// a <desc> block as JSON, so emitted values can be checked against the logs
// and regeneration is bit-identical.
void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<PlotSeries>& series, bool scatter = false);

}  // namespace solgen
