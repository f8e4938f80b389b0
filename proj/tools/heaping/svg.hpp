#pragma once

#include <string>
#include <vector>

#include "heaping/output.hpp"

namespace heaping::cli::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

struct Band {
  std::vector<double> x;
  std::vector<double> low;
  std::vector<double> high;
  std::string color = "#bbbbbb";
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Band> bands;
  std::vector<Series> lines;
  std::vector<Series> points;
};

struct BoxItem {
  std::string label;
  double min = 0, low = 0, median = 0, high = 0, max = 0;
  double empirical = 0;
};

struct Heatmap {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::vector<double> values;  // [row][col], row 0 at the bottom; NaN left blank
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  std::vector<std::string> row_labels;  // categorical axis when non-empty
  std::vector<std::string> col_labels;
  bool log_scale = false;
};

/// Categorical line colours, cycling.
std::string color(std::size_t index);

std::string render(const LineChart& chart, const RunInfo& run);
std::string render_boxplot(const std::string& title, const std::string& y_label,
                           const std::vector<BoxItem>& items, const RunInfo& run);
std::string render(const Heatmap& map, const RunInfo& run);

}  // namespace heaping::cli::svg
