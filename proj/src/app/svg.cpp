#include "fuzzydr/svg.hpp"

#include <algorithm>
#include <charconv>

#include "fuzzydr/error.hpp"

namespace fuzzydr {

namespace {

std::string num(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 3);
  return std::string(buf, ptr);
}

std::string escape(const std::string& s) {
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

}  // namespace

const std::vector<std::string>& svg_palette() {
  static const std::vector<std::string> colours{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colours;
}

std::string render_svg(const Eigen::MatrixXd& y, const std::vector<int>& labels, const SvgScatter& style) {
  if (y.cols() < 2) throw Error(ErrorCode::ShapeMismatch, "scatter plot needs two columns");
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(y.rows())) {
    throw Error(ErrorCode::ShapeMismatch, "label count differs from point count");
  }
  const double w = style.width;
  const double h = style.height;
  const double mx = 0.05 * w;
  const double my = 0.05 * h;
  double lo[2] = {0.0, 0.0};
  double span[2] = {1.0, 1.0};
  if (y.rows() > 0) {
    for (int a = 0; a < 2; ++a) {
      lo[a] = y.col(a).minCoeff();
      const double s = y.col(a).maxCoeff() - lo[a];
      span[a] = s > 0.0 ? s : 1.0;
    }
  }

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(style.width) +
         "\" height=\"" + std::to_string(style.height) + "\" viewBox=\"0 0 " + std::to_string(style.width) + " " +
         std::to_string(style.height) + "\">\n";
  if (!style.title.empty()) out += "<title>" + escape(style.title) + "</title>\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(style.width) + "\" height=\"" +
         std::to_string(style.height) + "\" fill=\"#ffffff\"/>\n";
  const auto& palette = svg_palette();
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const double cx = mx + (y(i, 0) - lo[0]) / span[0] * (w - 2.0 * mx);
    const double cy = h - my - (y(i, 1) - lo[1]) / span[1] * (h - 2.0 * my);
    std::string colour = "#555555";
    if (!labels.empty()) {
      const int l = labels[static_cast<std::size_t>(i)];
      colour = palette[static_cast<std::size_t>(((l % 10) + 10) % 10)];
    }
    out += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(style.point_radius) + "\" fill=\"" +
           colour + "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace fuzzydr
