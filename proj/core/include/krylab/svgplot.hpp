#pragma once

#include <string>
#include <vector>

namespace krylab {

enum class LineStyle { Solid, Dashed, DashDot };

/// One curve over iteration index 0, 1, 2, ... Non-finite values (and
/// nonpositive ones under a log scale) break the line into segments.
struct PlotSeries {
  std::string name;
  std::vector<double> values;
  LineStyle style = LineStyle::Solid;
  std::string color; // empty picks from the default palette
};

struct PlotLabels {
  std::string title;
  std::string x_label = "iteration k";
  std::string y_label;
};

/// Self-contained SVG line plot: axes, ticks (decades under log), legend.
/// No rendering dependencies.
std::string render_svg(const std::vector<PlotSeries> &series, bool log_y,
                       const PlotLabels &labels = {});

void emit_svg_plot(const std::vector<PlotSeries> &series, bool log_y, const std::string &path,
                   const PlotLabels &labels = {});

} // namespace krylab
