#include "fdflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace fdflow {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginL = 70.0;
constexpr double kMarginR = 160.0;
constexpr double kMarginT = 48.0;
constexpr double kMarginB = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string pow10_label(int e) {
  if (e == 0) return "1";
  return "1e" + std::to_string(e);
}

}  // namespace

std::string svg_log_log_plot(const std::string& title,
                             const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<PlotSeries>& series) {
  // Collect the plottable points to size the axes.
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
  bool any = false;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!(std::isfinite(x) && std::isfinite(y) && x > 0.0 && y > 0.0))
        continue;
      const double lx = std::log10(x), ly = std::log10(y);
      if (!any) {
        xmin = xmax = lx;
        ymin = ymax = ly;
        any = true;
      } else {
        xmin = std::min(xmin, lx);
        xmax = std::max(xmax, lx);
        ymin = std::min(ymin, ly);
        ymax = std::max(ymax, ly);
      }
    }
  if (!any) {
    xmin = -1.0;
    xmax = 1.0;
    ymin = -1.0;
    ymax = 1.0;
  }
  // Snap to whole decades with at least one decade of span.
  int x_lo = static_cast<int>(std::floor(xmin - 1e-9));
  int x_hi = static_cast<int>(std::ceil(xmax + 1e-9));
  int y_lo = static_cast<int>(std::floor(ymin - 1e-9));
  int y_hi = static_cast<int>(std::ceil(ymax + 1e-9));
  if (x_hi == x_lo) ++x_hi;
  if (y_hi == y_lo) ++y_hi;

  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  auto px = [&](double lx) {
    return kMarginL + (lx - x_lo) / double(x_hi - x_lo) * plot_w;
  };
  auto py = [&](double ly) {
    return kMarginT + (y_hi - ly) / double(y_hi - y_lo) * plot_h;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  // Frame.
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Decade ticks and grid lines.
  const int x_step = std::max(1, (x_hi - x_lo) / 10);
  for (int e = x_lo; e <= x_hi; e += x_step) {
    const double x = px(e);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(kMarginT) << "\" x2=\""
        << num(x) << "\" y2=\"" << num(kMarginT + plot_h)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(kMarginT + plot_h)
        << "\" x2=\"" << num(x) << "\" y2=\"" << num(kMarginT + plot_h + 5)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << num(kMarginT + plot_h + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << pow10_label(e) << "</text>\n";
  }
  const int y_step = std::max(1, (y_hi - y_lo) / 10);
  for (int e = y_lo; e <= y_hi; e += y_step) {
    const double y = py(e);
    out << "<line x1=\"" << num(kMarginL) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(kMarginL + plot_w) << "\" y2=\"" << num(y)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<line x1=\"" << num(kMarginL - 5) << "\" y1=\"" << num(y)
        << "\" x2=\"" << num(kMarginL) << "\" y2=\"" << num(y)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(kMarginL - 8) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << pow10_label(e) << "</text>\n";
  }

  // Axis labels.
  out << "<text x=\"" << kMarginL + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << kMarginT + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << kMarginT + plot_h / 2 << ")\">" << y_label << "</text>\n";

  // Series.
  for (size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    std::ostringstream pts;
    std::vector<std::pair<double, double>> kept;
    for (const auto& [x, y] : series[si].points) {
      if (!(std::isfinite(x) && std::isfinite(y) && x > 0.0 && y > 0.0))
        continue;
      const double sx = px(std::log10(x)), sy = py(std::log10(y));
      kept.emplace_back(sx, sy);
      pts << num(sx) << "," << num(sy) << " ";
    }
    if (!kept.empty()) {
      out << "<polyline points=\"" << pts.str()
          << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\"/>\n";
      for (const auto& [sx, sy] : kept)
        out << "<circle cx=\"" << num(sx) << "\" cy=\"" << num(sy)
            << "\" r=\"2.8\" fill=\"" << color << "\"/>\n";
    }
    // Legend entry, drawn whether or not the series had plottable points.
    const double ly = kMarginT + 12 + 18.0 * double(si);
    const double lx = kMarginL + plot_w + 14;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(lx + 22) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << series[si].label << "</text>\n";
  }

  out << "</svg>\n";
  return out.str();
}

std::vector<std::string> write_svg_plots(
    const std::string& out_base, const std::vector<SweepRecord>& rows) {
  // Group rows by beta, preserving first-seen order.
  std::vector<double> betas;
  for (const auto& r : rows)
    if (std::find(betas.begin(), betas.end(), r.beta) == betas.end())
      betas.push_back(r.beta);

  auto build = [&](auto field) {
    std::vector<PlotSeries> series;
    for (double b : betas) {
      PlotSeries s;
      char label[48];
      std::snprintf(label, sizeof(label), "beta = %g", b);
      s.label = label;
      for (const auto& r : rows)
        if (r.beta == b) s.points.emplace_back(r.epsilon, field(r));
      series.push_back(std::move(s));
    }
    return series;
  };

  const std::string f1 = out_base + "_l2h1.svg";
  const std::string f2 = out_base + "_l2final.svg";
  {
    std::ofstream out(f1);
    if (!out) throw std::runtime_error("cannot open for writing: " + f1);
    out << svg_log_log_plot("Velocity error, discrete L2(H1) norm", "epsilon",
                            "error",
                            build([](const SweepRecord& r) { return r.err_l2h1; }));
  }
  {
    std::ofstream out(f2);
    if (!out) throw std::runtime_error("cannot open for writing: " + f2);
    out << svg_log_log_plot(
        "Velocity error, final-time L2 norm", "epsilon", "error",
        build([](const SweepRecord& r) { return r.err_l2_final; }));
  }
  return {f1, f2};
}

}  // namespace fdflow
