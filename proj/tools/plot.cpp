#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mbrd/io.hpp"

namespace mbrd {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return lo > hi; }
  void pad() {
    if (empty()) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
      lo -= d;
      hi += d;
    }
  }
};

double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double s = 10.0;
  if (norm < 1.5)
    s = 1.0;
  else if (norm < 3.5)
    s = 2.0;
  else if (norm < 7.5)
    s = 5.0;
  return s * mag;
}

}  // namespace

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<Series>& series, int width,
                              int height) {
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;

  Range xr, yr;
  for (const Series& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
    for (double v : s.y_lo) yr.add(v);
    for (double v : s.y_hi) yr.add(v);
  }
  const bool no_data = xr.empty() || yr.empty();
  xr.pad();
  yr.pad();

  const auto mx = [&](double v) { return ml + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto my = [&](double v) {
    return height - mb - (v - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" font-family=\"monospace\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + px(width / 2.0) +
         "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         xml_escape(title) + "</text>\n";

  // axes box
  svg += "<rect x=\"" + px(ml) + "\" y=\"" + px(mt) + "\" width=\"" + px(pw) +
         "\" height=\"" + px(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // ticks and grid
  const double xs = tick_step(xr.hi - xr.lo);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9 * xs; t += xs) {
    const double X = mx(t);
    svg += "<line x1=\"" + px(X) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(X) +
           "\" y2=\"" + px(height - mb) +
           "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    svg += "<text x=\"" + px(X) + "\" y=\"" + px(height - mb + 16) +
           "\" text-anchor=\"middle\">" + fmt_double(t) + "</text>\n";
  }
  const double ys = tick_step(yr.hi - yr.lo);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9 * ys; t += ys) {
    const double Y = my(t);
    svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(Y) + "\" x2=\"" +
           px(width - mr) + "\" y2=\"" + px(Y) +
           "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    svg += "<text x=\"" + px(ml - 6) + "\" y=\"" + px(Y + 4) +
           "\" text-anchor=\"end\">" + fmt_double(t) + "</text>\n";
  }

  svg += "<text x=\"" + px(ml + pw / 2.0) + "\" y=\"" + px(height - 12.0) +
         "\" text-anchor=\"middle\">" + xml_escape(x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + px(mt + ph / 2.0) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         px(mt + ph / 2.0) + ")\">" + xml_escape(y_label) + "</text>\n";

  if (no_data) {
    svg += "<text x=\"" + px(ml + pw / 2.0) + "\" y=\"" + px(mt + ph / 2.0) +
           "\" text-anchor=\"middle\">no data</text>\n";
    svg += "</svg>\n";
    return svg;
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % kPaletteSize];

    if (s.y_lo.size() == s.x.size() && s.y_hi.size() == s.x.size()) {
      std::string pts;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y_hi[i])) continue;
        pts += px(mx(s.x[i])) + "," + px(my(s.y_hi[i])) + " ";
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y_lo[i])) continue;
        pts += px(mx(s.x[i])) + "," + px(my(s.y_lo[i])) + " ";
      }
      if (!pts.empty())
        svg += "<polygon points=\"" + pts + "\" fill=\"" + color +
               "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }

    // split the mean curve at NaN gaps
    std::string pts;
    int run = 0;
    const auto flush = [&] {
      if (run >= 2)
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" +
               color + "\" stroke-width=\"1.5\"/>\n";
      else if (run == 1)
        svg += "<circle cx=\"" + pts.substr(0, pts.find(',')) + "\" cy=\"" +
               pts.substr(pts.find(',') + 1, pts.find(' ') - pts.find(',') - 1) +
               "\" r=\"2\" fill=\"" + std::string(color) + "\"/>\n";
      pts.clear();
      run = 0;
    };
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      pts += px(mx(s.x[i])) + "," + px(my(s.y[i])) + " ";
      ++run;
    }
    flush();

    // legend entry
    const double ly = mt + 14.0 + 16.0 * static_cast<double>(si);
    svg += "<line x1=\"" + px(width - mr - 150) + "\" y1=\"" + px(ly - 4) +
           "\" x2=\"" + px(width - mr - 130) + "\" y2=\"" + px(ly - 4) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + px(width - mr - 124) + "\" y=\"" + px(ly) + "\">" +
           xml_escape(s.label) + "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace mbrd
