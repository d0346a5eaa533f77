#pragma once

#include <string>
#include <vector>

namespace lanemden {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // points instead of a polyline
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<PlotSeries> series;
};

// Standalone SVG document with axes, ticks and a legend.
std::string svg_plot(const PlotSpec& spec);

}  // namespace lanemden
