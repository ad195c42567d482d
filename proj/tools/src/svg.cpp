#include "aggrefeed_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace aggrefeed::cli {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  double px0 = 0.0, px1 = 1.0;
  double to_px(double v) const {
    if (hi == lo) return 0.5 * (px0 + px1);
    return px0 + (v - lo) / (hi - lo) * (px1 - px0);
  }
};

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series,
                           bool log_y) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto yval = [log_y](double v) {
    return log_y ? std::log10(std::max(v, 1e-16)) : v;
  };
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      const double v = yval(s.y[k]);
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (ymax == ymin) ymax = ymin + 1;

  Axis xa{xmin, xmax, double(kMarginLeft), double(kWidth - kMarginRight)};
  Axis ya{ymin, ymax, double(kHeight - kMarginBottom), double(kMarginTop)};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // Axes frame and ticks.
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << kWidth - kMarginLeft - kMarginRight << "\" height=\""
      << kHeight - kMarginTop - kMarginBottom
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double fx = xmin + (xmax - xmin) * t / kTicks;
    const double px = xa.to_px(fx);
    out << "<line x1=\"" << px << "\" y1=\"" << kHeight - kMarginBottom << "\" x2=\"" << px
        << "\" y2=\"" << kHeight - kMarginBottom + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px << "\" y=\"" << kHeight - kMarginBottom + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fx)
        << "</text>\n";
    const double fy = ymin + (ymax - ymin) * t / kTicks;
    const double py = ya.to_px(fy);
    const double label = log_y ? std::pow(10.0, fy) : fy;
    out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << py << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << (log_y ? ("1e" + fmt(std::round(fy * 100) / 100)) : fmt(label)) << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n"
      << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << y_label << "</text>\n";

  int legend_y = kMarginTop + 16;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      out << xa.to_px(s.x[k]) << ',' << ya.to_px(yval(s.y[k])) << ' ';
    }
    out << "\"/>\n";
    out << "<line x1=\"" << kMarginLeft + 10 << "\" y1=\"" << legend_y << "\" x2=\""
        << kMarginLeft + 40 << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kMarginLeft + 46 << "\" y=\"" << legend_y + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
  return out.str();
}

namespace {

// Blue-to-yellow altitude gradient
// (blue = low altitude, yellow = high).
std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  struct Stop {
    double pos;
    int r, g, b;
  };
  static const Stop stops[] = {
      {0.0, 48, 18, 140}, {0.35, 33, 113, 181}, {0.6, 61, 183, 155},
      {0.8, 190, 216, 70}, {1.0, 253, 231, 37}};
  for (int i = 1; i < 5; ++i) {
    if (t <= stops[i].pos) {
      const double f = (t - stops[i - 1].pos) / (stops[i].pos - stops[i - 1].pos);
      char buf[16];
      std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                    int(stops[i - 1].r + f * (stops[i].r - stops[i - 1].r)),
                    int(stops[i - 1].g + f * (stops[i].g - stops[i - 1].g)),
                    int(stops[i - 1].b + f * (stops[i].b - stops[i - 1].b)));
      return buf;
    }
  }
  return "#fde725";
}

}  // namespace

std::string svg_configuration(const aggrefeed::Terrain& terrain,
                              const std::vector<Eigen::Vector2d>& intruders,
                              const std::vector<Eigen::Vector2d>& robots_initial,
                              const std::vector<Eigen::Vector2d>& robots_final) {
  constexpr int kSize = 520;
  constexpr int kCells = 64;
  constexpr double kWorld = 100.0;
  const double cell = double(kSize) / kCells;

  double zmin = std::numeric_limits<double>::infinity(), zmax = -zmin;
  std::vector<double> z(kCells * kCells);
  for (int i = 0; i < kCells; ++i) {
    for (int j = 0; j < kCells; ++j) {
      const Eigen::Vector2d loc((i + 0.5) * kWorld / kCells, (j + 0.5) * kWorld / kCells);
      const double v = aggrefeed::altitude(terrain, loc);
      z[i * kCells + j] = v;
      zmin = std::min(zmin, v);
      zmax = std::max(zmax, v);
    }
  }
  if (zmax == zmin) zmax = zmin + 1;

  auto px = [&](double wx) { return wx / kWorld * kSize; };
  auto py = [&](double wy) { return kSize - wy / kWorld * kSize; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
      << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  for (int i = 0; i < kCells; ++i) {
    for (int j = 0; j < kCells; ++j) {
      const double t = (z[i * kCells + j] - zmin) / (zmax - zmin);
      out << "<rect x=\"" << i * cell << "\" y=\"" << kSize - (j + 1) * cell << "\" width=\""
          << cell + 0.5 << "\" height=\"" << cell + 0.5 << "\" fill=\"" << heat_color(t)
          << "\"/>\n";
    }
  }
  for (const auto& s : intruders) {
    const double x = px(s.x()), y = py(s.y());
    out << "<path d=\"M" << x - 6 << ' ' << y - 6 << " L" << x + 6 << ' ' << y + 6 << " M"
        << x - 6 << ' ' << y + 6 << " L" << x + 6 << ' ' << y - 6
        << "\" stroke=\"red\" stroke-width=\"3\"/>\n";
  }
  for (std::size_t i = 0; i < robots_initial.size() && i < robots_final.size(); ++i) {
    out << "<line x1=\"" << px(robots_initial[i].x()) << "\" y1=\"" << py(robots_initial[i].y())
        << "\" x2=\"" << px(robots_final[i].x()) << "\" y2=\"" << py(robots_final[i].y())
        << "\" stroke=\"white\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (const auto& r : robots_initial) {
    out << "<circle cx=\"" << px(r.x()) << "\" cy=\"" << py(r.y())
        << "\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }
  for (const auto& r : robots_final) {
    out << "<circle cx=\"" << px(r.x()) << "\" cy=\"" << py(r.y())
        << "\" r=\"6\" fill=\"black\" stroke=\"white\" stroke-width=\"1.5\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace aggrefeed::cli
