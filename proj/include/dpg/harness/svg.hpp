#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dpg::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> low;   // optional band, same length as y
  std::vector<double> high;
};

struct Marker {
  double value = 0.0;
  std::string label;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<Marker> vertical;    // e.g. the 2K budget line
  std::vector<Marker> horizontal;  // e.g. the 1 + eps ratio bound
  bool log_x = false;
};

std::string render(const LineChart& chart);

struct Heatmap {
  std::string title;
  std::string x_label = "step direction";
  std::string y_label = "random direction";
  std::vector<double> x;           // columns
  std::vector<double> y;           // rows
  std::vector<double> values;      // x index major: values[i * y.size() + j]
  std::vector<bool> flagged;       // optional, same layout
};

std::string render(const Heatmap& map);

struct Histogram {
  std::string title;
  std::string x_label;
  std::vector<std::pair<std::string, std::vector<double>>> groups;  // overlaid
  int bins = 10;
};

std::string render(const Histogram& hist);

// Several histograms side by side, one panel per entry.
std::string render_panels(const std::vector<Histogram>& panels, const std::string& title);

struct BarChart {
  std::string title;
  std::string y_label;
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;  // one vector per group, one entry per label
  std::vector<std::string> group_names;
};

std::string render(const BarChart& chart);

}  // namespace dpg::svg
