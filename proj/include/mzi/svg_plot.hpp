#pragma once

#include <Eigen/Dense>
#include <string>

namespace mzi {

// Self-contained SVG line plot: labeled axes, tick marks, one polyline.
// x and y must have equal, nonzero length.
std::string line_plot_svg(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                          const std::string& title, const std::string& x_label,
                          const std::string& y_label);

}  // namespace mzi
