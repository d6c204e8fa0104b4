#include "algnn/svg.hpp"

#include "algnn/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace algnn {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 32.0;
constexpr double kMarginBottom = 42.0;

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded_range(double lo, double hi) {
  if (!(lo <= hi)) {  // no finite data at all
    return {0.0, 1.0};
  }
  double pad = 0.05 * (hi - lo);
  if (pad == 0.0) pad = std::max(1e-12, 0.1 * std::abs(hi) + 1e-3);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string render_svg(const std::vector<PlotPanel>& panels) {
  require(!panels.empty(), "render_svg: need at least one panel");
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" "
         "font-family=\"sans-serif\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";

  const double panel_h = kHeight / static_cast<double>(panels.size());
  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const PlotPanel& panel = panels[pi];
    const double top = panel_h * static_cast<double>(pi);
    const double px0 = kMarginLeft;
    const double px1 = kWidth - kMarginRight;
    const double py0 = top + kMarginTop;
    const double py1 = top + panel_h - kMarginBottom;

    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const PlotSeries& s : panel.series) {
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        xlo = std::min(xlo, s.x[i]);
        xhi = std::max(xhi, s.x[i]);
        ylo = std::min(ylo, s.y[i]);
        yhi = std::max(yhi, s.y[i]);
      }
    }
    for (double m : panel.markers) {
      if (!std::isfinite(m)) continue;
      xlo = std::min(xlo, m);
      xhi = std::max(xhi, m);
    }
    const Range xr = padded_range(xlo, xhi);
    const Range yr = padded_range(ylo, yhi);

    auto sx = [&](double x) {
      return px0 + (x - xr.lo) / (xr.hi - xr.lo) * (px1 - px0);
    };
    auto sy = [&](double y) {
      return py1 - (y - yr.lo) / (yr.hi - yr.lo) * (py1 - py0);
    };

    out << "<rect x=\"" << fmt(px0) << "\" y=\"" << fmt(py0) << "\" width=\""
        << fmt(px1 - px0) << "\" height=\"" << fmt(py1 - py0)
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    for (int t = 0; t < 5; ++t) {
      const double fx = xr.lo + (xr.hi - xr.lo) * t / 4.0;
      const double gx = sx(fx);
      out << "<line x1=\"" << fmt(gx) << "\" y1=\"" << fmt(py1) << "\" x2=\"" << fmt(gx)
          << "\" y2=\"" << fmt(py1 + 5) << "\" stroke=\"#333333\"/>\n";
      out << "<text x=\"" << fmt(gx) << "\" y=\"" << fmt(py1 + 18)
          << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(fx, "%.4g")
          << "</text>\n";
      const double fy = yr.lo + (yr.hi - yr.lo) * t / 4.0;
      const double gy = sy(fy);
      out << "<line x1=\"" << fmt(px0 - 5) << "\" y1=\"" << fmt(gy) << "\" x2=\""
          << fmt(px0) << "\" y2=\"" << fmt(gy) << "\" stroke=\"#333333\"/>\n";
      out << "<text x=\"" << fmt(px0 - 8) << "\" y=\"" << fmt(gy + 4)
          << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(fy, "%.4g")
          << "</text>\n";
    }

    for (double m : panel.markers) {
      if (!std::isfinite(m)) continue;
      const double gx = sx(m);
      out << "<line x1=\"" << fmt(gx) << "\" y1=\"" << fmt(py1 - 8) << "\" x2=\""
          << fmt(gx) << "\" y2=\"" << fmt(py1) << "\" stroke=\"#888888\"/>\n";
    }

    for (const PlotSeries& s : panel.series) {
      std::ostringstream pts;
      bool open = false;
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        pts << (open ? " " : "") << fmt(sx(s.x[i])) << "," << fmt(sy(s.y[i]));
        open = true;
      }
      if (open)
        out << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\""
            << s.color << "\" stroke-width=\"1.5\"/>\n";
    }

    double legend_y = py0 + 14.0;
    for (const PlotSeries& s : panel.series) {
      if (s.label.empty()) continue;
      out << "<text x=\"" << fmt(px1 - 6) << "\" y=\"" << fmt(legend_y)
          << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << s.color << "\">"
          << escape(s.label) << "</text>\n";
      legend_y += 14.0;
    }

    if (!panel.title.empty())
      out << "<text x=\"" << fmt((px0 + px1) / 2) << "\" y=\"" << fmt(top + 18)
          << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(panel.title)
          << "</text>\n";
    if (!panel.xlabel.empty())
      out << "<text x=\"" << fmt((px0 + px1) / 2) << "\" y=\"" << fmt(py1 + 34)
          << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(panel.xlabel)
          << "</text>\n";
    if (!panel.ylabel.empty())
      out << "<text x=\"" << fmt(px0 - 52) << "\" y=\"" << fmt((py0 + py1) / 2)
          << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
          << fmt(px0 - 52) << " " << fmt((py0 + py1) / 2) << ")\">"
          << escape(panel.ylabel) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg_file(const std::string& path, const std::vector<PlotPanel>& panels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write SVG file " + path);
  out << render_svg(panels);
}

}  // namespace algnn
