#include "bocs/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bocs {

namespace {

constexpr int kWidth = 840;
constexpr int kHeight = 520;
constexpr int kLeft = 70, kRight = 200, kTop = 40, kBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Span {
  double lo = 0.0, hi = 1.0;
  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

void write_curve_svg(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<CurveSeries>& series) {
  Span xs, ys;
  bool first = true;
  for (const CurveSeries& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xs.lo = xs.hi = s.x[i];
        ys.lo = ys.hi = s.mean[i];
        first = false;
      }
      xs.include(s.x[i]);
      ys.include(s.mean[i] - s.half_width[i]);
      ys.include(s.mean[i] + s.half_width[i]);
    }
  if (xs.hi <= xs.lo) xs.hi = xs.lo + 1.0;
  if (ys.hi <= ys.lo) ys.hi = ys.lo + 1.0;
  const double ypad = 0.05 * (ys.hi - ys.lo);
  ys.lo -= ypad;
  ys.hi += ypad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - xs.lo) / (xs.hi - xs.lo) * pw; };
  auto py = [&](double v) { return kTop + ph - (v - ys.lo) / (ys.hi - ys.lo) * ph; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"16\">" << title << "</text>\n";

  // Axes with 5 ticks per side.
  out << "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = xs.lo + (xs.hi - xs.lo) * t / 5.0;
    const double yv = ys.lo + (ys.hi - ys.lo) * t / 5.0;
    out << "<line x1=\"" << fmt(px(xv)) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(px(xv))
        << "\" y2=\"" << kTop + ph << "\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(py(yv)) << "\" x2=\"" << kLeft + pw
        << "\" y2=\"" << fmt(py(yv)) << "\"/>\n";
  }
  out << "</g>\n";
  out << "<g fill=\"#333333\">\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = xs.lo + (xs.hi - xs.lo) * t / 5.0;
    const double yv = ys.lo + (ys.hi - ys.lo) * t / 5.0;
    out << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(py(yv) + 4)
        << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kTop + ph / 2 << ")\">" << y_label << "</text>\n";
  out << "</g>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const CurveSeries& c = series[s];
    const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (c.x.empty()) continue;
    // Band: forward along the upper edge, back along the lower.
    out << "<path fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" d=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i)
      out << (i == 0 ? "M" : "L") << fmt(px(c.x[i])) << " " << fmt(py(c.mean[i] + c.half_width[i]))
          << " ";
    for (std::size_t i = c.x.size(); i-- > 0;)
      out << "L" << fmt(px(c.x[i])) << " " << fmt(py(c.mean[i] - c.half_width[i])) << " ";
    out << "Z\"/>\n";
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i)
      out << fmt(px(c.x[i])) << "," << fmt(py(c.mean[i])) << " ";
    out << "\"/>\n";
    const double ly = kTop + 16 + 20.0 * static_cast<double>(s);
    out << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
        << kLeft + pw + 36 << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + pw + 42 << "\" y=\"" << fmt(ly) << "\">" << c.label
        << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("error while writing " + path);
}

}  // namespace bocs
