#include "mzi/svg_plot.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mzi {

namespace {

constexpr double width = 800.0, height = 480.0;
constexpr double margin_left = 72.0, margin_right = 24.0;
constexpr double margin_top = 40.0, margin_bottom = 56.0;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Round tick spacing to 1/2/5 times a power of ten so labels stay short.
double tick_step(double span) {
  double raw = span / 6.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double frac = raw / mag;
  if (frac <= 2.0) return 2.0 * mag;
  if (frac <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

}  // namespace

std::string line_plot_svg(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y,
                          const std::string& title, const std::string& x_label,
                          const std::string& y_label) {
  if (x.size() == 0 || x.size() != y.size())
    throw std::invalid_argument("line_plot_svg: x and y must have equal, nonzero length");

  double x_min = x.minCoeff(), x_max = x.maxCoeff();
  double y_min = std::min(y.minCoeff(), 0.0), y_max = y.maxCoeff();
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double plot_w = width - margin_left - margin_right;
  const double plot_h = height - margin_top - margin_bottom;
  auto px = [&](double v) { return margin_left + (v - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double v) { return height - margin_bottom - (v - y_min) / (y_max - y_min) * plot_h; };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
      fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n" +
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" +
      "<text x=\"" + fmt(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"16\">" + escape(title) + "</text>\n";

  // Axes.
  svg += "<g stroke=\"black\" fill=\"none\">\n";
  svg += "<path d=\"M" + fmt(margin_left) + " " + fmt(margin_top) + " V" +
         fmt(height - margin_bottom) + " H" + fmt(width - margin_right) + "\"/>\n";
  svg += "</g>\n";

  // Ticks and numeric labels.
  svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  const double xs = tick_step(x_max - x_min);
  for (double t = std::ceil(x_min / xs) * xs; t <= x_max + 1e-9 * xs; t += xs) {
    const double gx = px(t);
    svg += "<line x1=\"" + fmt(gx) + "\" y1=\"" + fmt(height - margin_bottom) + "\" x2=\"" +
           fmt(gx) + "\" y2=\"" + fmt(height - margin_bottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(gx) + "\" y=\"" + fmt(height - margin_bottom + 18) +
           "\" text-anchor=\"middle\">" + fmt(t) + "</text>\n";
  }
  const double ys = tick_step(y_max - y_min);
  for (double t = std::ceil(y_min / ys) * ys; t <= y_max + 1e-9 * ys; t += ys) {
    const double gy = py(t);
    svg += "<line x1=\"" + fmt(margin_left - 5) + "\" y1=\"" + fmt(gy) + "\" x2=\"" +
           fmt(margin_left) + "\" y2=\"" + fmt(gy) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(margin_left - 8) + "\" y=\"" + fmt(gy + 4) +
           "\" text-anchor=\"end\">" + fmt(t, "%.3g") + "</text>\n";
  }
  svg += "</g>\n";

  // Axis labels.
  svg += "<text x=\"" + fmt(margin_left + plot_w / 2) + "\" y=\"" + fmt(height - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         escape(x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(margin_top + plot_h / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 " +
         fmt(margin_top + plot_h / 2) + ")\">" + escape(y_label) + "</text>\n";

  // The data itself.
  svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) svg += ' ';
    svg += fmt(px(x[i]), "%.2f") + "," + fmt(py(y[i]), "%.2f");
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

}  // namespace mzi
