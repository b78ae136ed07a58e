#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "calibre/interval.hpp"
#include "calibre/io.hpp"
#include "calibre/metrics.hpp"

namespace calibre::svg {

namespace detail {

inline constexpr double kSize = 480.0;
inline constexpr double kMarginLeft = 64.0;
inline constexpr double kMarginRight = 24.0;
inline constexpr double kMarginTop = 32.0;
inline constexpr double kMarginBottom = 56.0;

struct Frame {
  double lo;
  double hi;

  double x(double v) const {
    return kMarginLeft + (v - lo) / (hi - lo) * (kSize - kMarginLeft - kMarginRight);
  }
  double y(double v) const {
    return kSize - kMarginBottom - (v - lo) / (hi - lo) * (kSize - kMarginTop - kMarginBottom);
  }
};

inline std::string num(double v) {
  // Snap coordinates to 1/100 px so the markup stays short and stable.
  return format_double(std::round(v * 100.0) / 100.0);
}

inline void open_chart(std::string& out, const std::string& title) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
         "viewBox=\"0 0 480 480\" font-family=\"monospace\" font-size=\"12\">\n";
  out += "<rect width=\"480\" height=\"480\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"" + num(kSize / 2.0) + "\" y=\"20\" text-anchor=\"middle\" fill=\"#202020\">" +
         title + "</text>\n";
}

inline void axes(std::string& out, const Frame& f, const std::string& x_label,
                 const std::string& y_label) {
  const double x0 = f.x(f.lo), x1 = f.x(f.hi);
  const double y0 = f.y(f.lo), y1 = f.y(f.hi);
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x1) + "\" y2=\"" +
         num(y0) + "\" stroke=\"#202020\"/>\n";
  out += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" + num(x0) + "\" y2=\"" +
         num(y1) + "\" stroke=\"#202020\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = f.lo + (f.hi - f.lo) * static_cast<double>(i) / 4.0;
    const std::string label = format_double(std::round(v * 1000.0) / 1000.0);
    out += "<text x=\"" + num(f.x(v)) + "\" y=\"" + num(y0 + 18.0) +
           "\" text-anchor=\"middle\" fill=\"#202020\">" + label + "</text>\n";
    out += "<text x=\"" + num(x0 - 8.0) + "\" y=\"" + num(f.y(v) + 4.0) +
           "\" text-anchor=\"end\" fill=\"#202020\">" + label + "</text>\n";
  }
  out += "<text x=\"" + num((x0 + x1) / 2.0) + "\" y=\"" + num(y0 + 40.0) +
         "\" text-anchor=\"middle\" fill=\"#202020\">" + x_label + "</text>\n";
  out += "<text x=\"16\" y=\"" + num((y0 + y1) / 2.0) +
         "\" text-anchor=\"middle\" fill=\"#202020\" transform=\"rotate(-90 16 " +
         num((y0 + y1) / 2.0) + ")\">" + y_label + "</text>\n";
}

inline void identity_line(std::string& out, const Frame& f) {
  out += "<line x1=\"" + num(f.x(f.lo)) + "\" y1=\"" + num(f.y(f.lo)) + "\" x2=\"" +
         num(f.x(f.hi)) + "\" y2=\"" + num(f.y(f.hi)) +
         "\" stroke=\"#999999\" stroke-dasharray=\"6 4\"/>\n";
}

}  // namespace detail

// Per-bin RMSE against RMV with the dashed grey identity line marking
// ideal calibration. A pure view: every number is taken from the report.
inline std::string reliability_diagram_svg(const CalibrationReport& report,
                                           const std::string& label) {
  using namespace detail;
  double hi = 0.0;
  for (const auto& row : report.diagram.rows) hi = std::max({hi, row.rmv, row.rmse});
  if (!(hi > 0.0)) hi = 1.0;
  const Frame f{0.0, hi * 1.05};

  std::string out;
  open_chart(out, "reliability " + label + " (ENCE " +
                      format_double(std::round(report.ence * 10000.0) / 10000.0) + ")");
  axes(out, f, "RMV", "RMSE");
  identity_line(out, f);

  std::string path;
  for (const auto& row : report.diagram.rows) {
    path += (path.empty() ? "M" : " L");
    path += num(f.x(row.rmv)) + " " + num(f.y(row.rmse));
  }
  if (!path.empty())
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"#1a66cc\" stroke-width=\"1.5\"/>\n";
  for (const auto& row : report.diagram.rows)
    out += "<circle cx=\"" + num(f.x(row.rmv)) + "\" cy=\"" + num(f.y(row.rmse)) +
           "\" r=\"3.5\" fill=\"#1a66cc\"/>\n";
  out += "</svg>\n";
  return out;
}

// Observed coverage against expected confidence level on the fixed grid,
// with the same identity-line convention.
inline std::string interval_plot_svg(const IntervalCalibrationPlot& plot,
                                     const std::string& label) {
  using namespace detail;
  const Frame f{0.0, 1.0};
  std::string out;
  open_chart(out, "interval calibration " + label + " (max dev " +
                      format_double(std::round(plot.max_abs_deviation * 10000.0) / 10000.0) + ")");
  axes(out, f, "expected confidence p", "observed fraction");
  identity_line(out, f);

  std::string path;
  for (std::size_t i = 0; i < plot.p.size(); ++i) {
    path += (path.empty() ? "M" : " L");
    path += num(f.x(plot.p[i])) + " " + num(f.y(plot.p_hat[i]));
  }
  if (!path.empty())
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"#cc3311\" stroke-width=\"1.5\"/>\n";
  for (std::size_t i = 0; i < plot.p.size(); ++i)
    out += "<circle cx=\"" + num(f.x(plot.p[i])) + "\" cy=\"" + num(f.y(plot.p_hat[i])) +
           "\" r=\"3\" fill=\"#cc3311\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace calibre::svg
