#pragma once

#include <string>
#include <vector>

namespace lanestab {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Marker {
  double x;
  double y;
  std::string color;
  std::string label;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<Marker> markers;
};

/// Standalone SVG line chart, one polyline per series. Output depends only
/// on the chart contents (fixed-precision coordinates).
std::string render_svg(const Chart& chart);

}  // namespace lanestab
