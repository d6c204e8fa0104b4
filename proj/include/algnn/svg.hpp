#pragma once

#include <string>
#include <vector>

namespace algnn {

struct PlotSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  std::string label;
};

struct PlotPanel {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<PlotSeries> series;
  std::vector<double> markers;  // x positions ticked above the baseline
};

// Self-contained SVG, fixed 800x500 viewBox, panels stacked vertically,
// 5 ticks per axis. Pure function of the data: bit-stable across runs.
std::string render_svg(const std::vector<PlotPanel>& panels);

void write_svg_file(const std::string& path, const std::vector<PlotPanel>& panels);

}  // namespace algnn
