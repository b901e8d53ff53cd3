#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fdflow/sweep.hpp"

namespace fdflow {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), positive to plot
};

/// Self-contained log-log line chart: one polyline per series, decade ticks,
/// legend. Points with nonpositive or non-finite coordinates are skipped.
std::string svg_log_log_plot(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series);

/// Write one chart per error norm from sweep rows, one series per beta:
/// <out_base>_l2h1.svg and <out_base>_l2final.svg. Returns the paths.
std::vector<std::string> write_svg_plots(const std::string& out_base,
                                         const std::vector<SweepRecord>& rows);

}  // namespace fdflow
