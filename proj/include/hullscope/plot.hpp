#ifndef HULLSCOPE_PLOT_HPP
#define HULLSCOPE_PLOT_HPP

#include <algorithm>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hullscope/errors.hpp"
#include "hullscope/hull.hpp"
#include "hullscope/io.hpp"

namespace hullscope {

// Small hand-rolled SVG emitters for the two plot kinds the CLI produces.
// Data values are embedded as text (a <desc> block) so plots diff cleanly.

inline std::string svg_line_plot(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::string& title, const std::string& xlabel,
                                 const std::string& ylabel) {
  const double width = 640, height = 400, ml = 70, mr = 20, mt = 40, mb = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (double x : xs) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  for (double y : ys) {
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) {
    ymax = ymin + 1e-12;
    const double mid = ymin;
    ymin = mid - 1e-12;
  }
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };
  std::ostringstream svg;
  svg.precision(12);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<desc>";
  for (std::size_t i = 0; i < xs.size(); ++i) svg << xs[i] << ',' << ys[i] << ' ';
  svg << "</desc>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  // axes
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
  svg << "<text x=\"18\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 " << height / 2
      << ")\">" << ylabel << "</text>\n";
  svg << "<text x=\"" << ml - 6 << "\" y=\"" << py(ymin)
      << "\" text-anchor=\"end\" font-size=\"10\">" << ymin << "</text>\n";
  svg << "<text x=\"" << ml - 6 << "\" y=\"" << py(ymax) + 4
      << "\" text-anchor=\"end\" font-size=\"10\">" << ymax << "</text>\n";
  svg << "<text x=\"" << px(xmin) << "\" y=\"" << height - mb + 16
      << "\" text-anchor=\"middle\" font-size=\"10\">" << xmin << "</text>\n";
  svg << "<text x=\"" << px(xmax) << "\" y=\"" << height - mb + 16
      << "\" text-anchor=\"middle\" font-size=\"10\">" << xmax << "</text>\n";
  svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) svg << px(xs[i]) << ',' << py(ys[i]) << ' ';
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

inline std::string svg_slice_plot(const SliceResult& slice) {
  const int res = slice.spec.res;
  const double size = 560, margin = 60;
  const double cell = size / std::max(1, res);
  std::ostringstream svg;
  svg.precision(12);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin
      << "\" height=\"" << size + 2 * margin << "\">\n";
  svg << "<desc>";
  for (const SlicePoint& p : slice.points)
    svg << p.zeta.real() << ',' << p.zeta.imag() << ',' << p.value << ',' << to_string(p.verdict)
        << ' ';
  svg << "</desc>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int iy = 0; iy < res; ++iy)
    for (int ix = 0; ix < res; ++ix) {
      const SlicePoint& p = slice.points[static_cast<std::size_t>(iy * res + ix)];
      const char* fill = p.verdict == Verdict::inside
                             ? "#4a90d9"
                             : (p.verdict == Verdict::boundary ? "#f5a623" : "#f0f0f0");
      svg << "<rect x=\"" << margin + ix * cell << "\" y=\"" << margin + (res - 1 - iy) * cell
          << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
    }
  svg << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size << "\" height=\""
      << size << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << margin + size / 2 << "\" y=\"" << margin + size + 28
      << "\" text-anchor=\"middle\" font-size=\"12\">Re zeta in [-" << slice.spec.span << ", "
      << slice.spec.span << "]</text>\n";
  svg << "<text x=\"20\" y=\"" << margin + size / 2 << "\" font-size=\"12\" "
      << "text-anchor=\"middle\" transform=\"rotate(-90 20 " << margin + size / 2
      << ")\">Im zeta</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hullscope

#endif  // HULLSCOPE_PLOT_HPP
