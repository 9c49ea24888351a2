#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tarifflab/cluster.hpp"

namespace tarifflab::svg {

// Deterministic "%.6g" rendering used for every coordinate and label.
std::string fmt(double v);

std::string escape(const std::string& text);

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  std::string label;  // drawn next to the marker when non-empty
  std::string color = "#1f77b4";
  double radius = 4.0;
};

// y = intercept + slope * x, clipped to the plot box.
struct GuideLine {
  double slope = 0.0;
  double intercept = 0.0;
  std::string color = "#888888";
  bool dashed = false;
  std::string label;
};

struct HullOverlay {
  std::vector<cluster::Point2> vertices;
  std::string color;
  std::string label;  // legend entry
};

struct ScatterSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ScatterPoint> points;
  std::vector<GuideLine> guides;
  std::vector<HullOverlay> hulls;
  bool log_y = false;  // requires every y > 0
};

std::string scatter_chart(const ScatterSpec& spec);

struct BarSeries {
  std::string name;
  std::string color;
  std::vector<double> values;  // one per category
};

struct BarSpec {
  std::string title;
  std::string y_label;
  std::vector<std::string> categories;
  std::vector<BarSeries> series;
  std::optional<double> reference_line;  // dashed red horizontal marker
  std::string reference_label;
};

std::string bar_chart(const BarSpec& spec);

struct LineSeries {
  std::string name;
  std::string color;
  std::vector<double> values;  // index is the x coordinate (time step)
};

struct LineSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<LineSeries> series;
};

std::string line_chart(const LineSpec& spec);

}  // namespace tarifflab::svg
