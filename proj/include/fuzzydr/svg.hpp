#pragma once

// Scatter plots of 2-D embeddings as standalone SVG 1.1 documents.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fuzzydr {

struct SvgScatter {
  int width = 600;
  int height = 600;
  double point_radius = 2.5;
  std::string title;
};

/// Ten fixed colours; label l uses entry l mod 10, unlabelled points are grey.
const std::vector<std::string>& svg_palette();

/// Plots the first two columns of `y`, mapped affinely into the viewport with
/// a 5% margin on every side. Throws ShapeMismatch for fewer than two columns
/// or a label count that differs from the row count.
std::string render_svg(const Eigen::MatrixXd& y, const std::vector<int>& labels, const SvgScatter& style = {});

}  // namespace fuzzydr
