#pragma once

#include <string>
#include <vector>

namespace bocs {

/// One plotted curve: mean with a symmetric band, indexed by x_values.
struct CurveSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> half_width;  // band half-height; zeros for no band
};

/// Writes a self-contained SVG line chart with shaded bands. Output is a
/// deterministic function of the inputs.
void write_curve_svg(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<CurveSeries>& series);

}  // namespace bocs
