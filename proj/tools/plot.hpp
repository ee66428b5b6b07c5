#pragma once

#include <string>
#include <vector>

namespace mbrd {

// One labeled curve; y_lo/y_hi, when non-empty, draw a shaded band around it.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_lo;
  std::vector<double> y_hi;
};

// Deterministic standalone SVG line chart: fixed palette, fixed tick rules,
// all coordinates formatted with fixed precision so identical inputs give
// identical bytes. NaN points are skipped.
std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series,
                              int width = 960, int height = 540);

}  // namespace mbrd
