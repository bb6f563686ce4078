#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "netsplit/io.hpp"

namespace netsplit::svg {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

/// Minimal line-chart writer: fixed 800x600 canvas, axes with end labels,
/// legend. CSV stays the canonical output; this is a convenience view.
inline void write_line_chart(const std::string& path, const std::string& title,
                             const std::string& xlabel, const std::string& ylabel,
                             const std::vector<Series>& series) {
  static const char* kColors[] = {"#c23b3b", "#2b5fa3", "#3c8a4e", "#8a5fb0", "#b0762b"};
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isnan(s.x[i]) || std::isnan(s.y[i])) continue;
      if (!any) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        any = true;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double x0 = 80, x1 = 760, y0 = 540, y1 = 60;  // plot box, y inverted
  const auto px = [&](double x) { return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0); };
  const auto py = [&](double y) { return y0 + (y - ymin) / (ymax - ymin) * (y1 - y0); };
  using netsplit::detail::format_double;

  auto out = netsplit::detail::open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n"
      << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
      << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">" << title
      << "</text>\n"
      << "<line x1=\"80\" y1=\"540\" x2=\"760\" y2=\"540\" stroke=\"black\"/>\n"
      << "<line x1=\"80\" y1=\"60\" x2=\"80\" y2=\"540\" stroke=\"black\"/>\n"
      << "<text x=\"400\" y=\"580\" text-anchor=\"middle\" font-size=\"14\">" << xlabel
      << "</text>\n"
      << "<text x=\"24\" y=\"300\" text-anchor=\"middle\" font-size=\"14\" "
         "transform=\"rotate(-90 24 300)\">"
      << ylabel << "</text>\n";
  out << "<text x=\"80\" y=\"558\" text-anchor=\"middle\" font-size=\"11\">"
      << format_double(xmin) << "</text>\n"
      << "<text x=\"760\" y=\"558\" text-anchor=\"middle\" font-size=\"11\">"
      << format_double(xmax) << "</text>\n"
      << "<text x=\"74\" y=\"544\" text-anchor=\"end\" font-size=\"11\">"
      << format_double(ymin) << "</text>\n"
      << "<text x=\"74\" y=\"64\" text-anchor=\"end\" font-size=\"11\">"
      << format_double(ymax) << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % 5];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isnan(s.x[i]) || std::isnan(s.y[i])) continue;
      out << format_double(px(s.x[i])) << ',' << format_double(py(s.y[i])) << ' ';
    }
    out << "\"/>\n";
    const double ly = 70 + 20 * static_cast<double>(si);
    out << "<line x1=\"620\" y1=\"" << format_double(ly) << "\" x2=\"650\" y2=\""
        << format_double(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"656\" y=\"" << format_double(ly + 4) << "\" font-size=\"12\">"
        << s.label << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw data_error("write failed: " + path);
}

}  // namespace netsplit::svg
