#include "krylab/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "krylab/csv.hpp"
#include "krylab/errors.hpp"

namespace krylab {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 52.0;

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#7f7f7f", "#9467bd", "#8c564b"};

std::string dash_for(LineStyle s) {
  switch (s) {
    case LineStyle::Solid:
      return "";
    case LineStyle::Dashed:
      return " stroke-dasharray=\"8 5\"";
    case LineStyle::DashDot:
      return " stroke-dasharray=\"10 4 2 4\"";
  }
  return "";
}

std::string escape_xml(const std::string &s) {
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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

/// Tick label in plain or scientific form, short.
std::string tick_label(double v, bool log_scale) {
  char buf[32];
  if (log_scale) {
    std::snprintf(buf, sizeof(buf), "1e%d", static_cast<int>(std::lround(std::log10(v))));
  } else if (v == std::floor(v) && std::abs(v) < 1e6) {
    std::snprintf(buf, sizeof(buf), "%d", static_cast<int>(v));
  } else {
    std::snprintf(buf, sizeof(buf), "%.3g", v);
  }
  return buf;
}

} // namespace

std::string render_svg(const std::vector<PlotSeries> &series, bool log_y, const PlotLabels &labels) {
  if (series.empty()) throw InvalidInputError("render_svg: no series");
  const std::size_t len = series.front().values.size();
  for (const PlotSeries &s : series) {
    if (s.values.size() != len) throw InvalidInputError("render_svg: series lengths differ");
  }
  if (len == 0) throw InvalidInputError("render_svg: empty series");

  auto usable = [&](double v) { return std::isfinite(v) && (!log_y || v > 0.0); };

  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();
  for (const PlotSeries &s : series) {
    for (double v : s.values) {
      if (!usable(v)) continue;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!(ymin <= ymax)) throw InvalidInputError("render_svg: no plottable values");
  if (log_y) {
    ymin = std::log10(ymin);
    ymax = std::log10(ymax);
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double xmax = static_cast<double>(len - 1);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double k) { return kLeft + (xmax == 0.0 ? 0.5 * plot_w : k / xmax * plot_w); };
  auto sy = [&](double v) {
    const double t = log_y ? std::log10(v) : v;
    return kTop + (ymax - t) / (ymax - ymin) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";

  if (!labels.title.empty()) {
    svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
           escape_xml(labels.title) + "</text>\n";
  }

  // frame
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(plot_w) +
         "\" height=\"" + num(plot_h) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // y ticks: decades under log, 6 even steps otherwise
  if (log_y) {
    const int dlo = static_cast<int>(std::ceil(ymin - 1e-9));
    const int dhi = static_cast<int>(std::floor(ymax + 1e-9));
    int stride = std::max(1, (dhi - dlo) / 8);
    for (int d = dlo; d <= dhi; d += stride) {
      const double y = sy(std::pow(10.0, d));
      svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kWidth - kRight) +
             "\" y2=\"" + num(y) + "\" stroke=\"#dddddd\"/>\n";
      svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
             tick_label(std::pow(10.0, d), true) + "</text>\n";
    }
  } else {
    for (int i = 0; i <= 6; ++i) {
      const double v = ymin + (ymax - ymin) * i / 6.0;
      const double y = kTop + plot_h - plot_h * i / 6.0;
      svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + num(kWidth - kRight) +
             "\" y2=\"" + num(y) + "\" stroke=\"#dddddd\"/>\n";
      svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
             tick_label(v, false) + "</text>\n";
    }
  }

  // x ticks: at most ~10, integer positions
  {
    const int stride = std::max<std::size_t>(1, len / 10);
    for (std::size_t k = 0; k < len; k += stride) {
      const double x = sx(static_cast<double>(k));
      svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + plot_h) + "\" x2=\"" + num(x) +
             "\" y2=\"" + num(kTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + plot_h + 18) + "\" text-anchor=\"middle\">" +
             std::to_string(k) + "</text>\n";
    }
  }

  svg += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\">" + escape_xml(labels.x_label) + "</text>\n";
  if (!labels.y_label.empty()) {
    svg += "<text x=\"16\" y=\"" + num(kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num(kTop + plot_h / 2) + ")\">" + escape_xml(labels.y_label) + "</text>\n";
  }

  // curves: one polyline per contiguous run of plottable values
  for (std::size_t si = 0; si < series.size(); ++si) {
    const PlotSeries &s = series[si];
    const std::string color = s.color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))]
                                              : s.color;
    std::string points;
    auto flush = [&]() {
      if (points.empty()) return;
      svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.6\"" + dash_for(s.style) +
             " points=\"" + points + "\"/>\n";
      points.clear();
    };
    for (std::size_t k = 0; k < len; ++k) {
      const double v = s.values[k];
      if (!usable(v)) {
        flush(); // gap
        continue;
      }
      if (!points.empty()) points += ' ';
      points += num(sx(static_cast<double>(k))) + "," + num(sy(v));
    }
    flush();
  }

  // legend
  {
    double ly = kTop + 12.0;
    const double lx = kWidth - kRight - 190.0;
    for (std::size_t si = 0; si < series.size(); ++si) {
      const PlotSeries &s = series[si];
      const std::string color = s.color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))]
                                                : s.color;
      svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 28) + "\" y2=\"" +
             num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"1.6\"" + dash_for(s.style) + "/>\n";
      svg += "<text x=\"" + num(lx + 34) + "\" y=\"" + num(ly) + "\">" + escape_xml(s.name) + "</text>\n";
      ly += 16.0;
    }
  }

  svg += "</svg>\n";
  return svg;
}

void emit_svg_plot(const std::vector<PlotSeries> &series, bool log_y, const std::string &path,
                   const PlotLabels &labels) {
  write_file_atomic(path, render_svg(series, log_y, labels));
}

} // namespace krylab
