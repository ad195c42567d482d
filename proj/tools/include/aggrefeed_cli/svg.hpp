#ifndef AGGREFEED_CLI_SVG_HPP
#define AGGREFEED_CLI_SVG_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aggrefeed/scenarios.hpp"

namespace aggrefeed::cli {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static line chart; log_y clamps values below 1e-16.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series,
                           bool log_y);

/// Planar configuration over an altitude heatmap: intruders as crosses,
/// robots hollow at t = 0 and filled at t = T.
std::string svg_configuration(const aggrefeed::Terrain& terrain,
                              const std::vector<Eigen::Vector2d>& intruders,
                              const std::vector<Eigen::Vector2d>& robots_initial,
                              const std::vector<Eigen::Vector2d>& robots_final);

}  // namespace aggrefeed::cli

#endif
