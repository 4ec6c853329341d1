#include "topodem/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "topodem/format.hpp"

namespace topodem {

namespace {

constexpr double kPlotSize = 440.0;
constexpr double kMargin = 50.0;
constexpr double kCanvas = kPlotSize + 2 * kMargin;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
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

std::string svg_header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kCanvas) + "\" height=\"" +
         num(kCanvas) + "\" viewBox=\"0 0 " + num(kCanvas) + " " + num(kCanvas) + "\">\n";
}

std::string axes_box() {
  std::string out;
  out += "  <rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" +
         num(kPlotSize) + "\" height=\"" + num(kPlotSize) +
         "\" fill=\"white\" stroke=\"black\"/>\n";
  return out;
}

} // namespace

std::string diagram_svg(const PersistenceDiagram& diagram) {
  // Data space is the unit square; y grows upward.
  auto px = [](double x) { return kMargin + x * kPlotSize; };
  auto py = [](double y) { return kMargin + (1.0 - y) * kPlotSize; };

  std::string out = svg_header();
  out += axes_box();
  // Ticks at 0, 0.5, 1 on both axes.
  for (double t : {0.0, 0.5, 1.0}) {
    out += "  <text x=\"" + num(px(t)) + "\" y=\"" + num(kMargin + kPlotSize + 18) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + num(t) + "</text>\n";
    out += "  <text x=\"" + num(kMargin - 8) + "\" y=\"" + num(py(t) + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">" + num(t) + "</text>\n";
  }
  out += "  <text x=\"" + num(kMargin + kPlotSize / 2) + "\" y=\"" + num(kCanvas - 10) +
         "\" font-size=\"13\" text-anchor=\"middle\">birth</text>\n";
  out += "  <text x=\"14\" y=\"" + num(kMargin + kPlotSize / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         num(kMargin + kPlotSize / 2) + ")\">death</text>\n";
  // Diagonal birth = death.
  out += "  <line x1=\"" + num(px(0)) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(px(1)) +
         "\" y2=\"" + num(py(1)) + "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  for (const auto& p : diagram.points) {
    const double death = std::isinf(p.death) ? 1.0 : p.death;
    const std::string title = "<title>" + xml_escape(p.birth_vertex) + " (" +
                              format_sig(p.birth) + ", " +
                              (std::isinf(p.death) ? std::string("inf") : format_sig(p.death)) +
                              ")</title>";
    if (p.essential) {
      const double cx = px(p.birth), cy = py(death), r = 5.0;
      out += "  <rect x=\"" + num(cx - r) + "\" y=\"" + num(cy - r) + "\" width=\"" +
             num(2 * r) + "\" height=\"" + num(2 * r) +
             "\" fill=\"firebrick\" class=\"essential\">" + title + "</rect>\n";
    } else {
      out += "  <circle cx=\"" + num(px(p.birth)) + "\" cy=\"" + num(py(death)) +
             "\" r=\"4\" fill=\"steelblue\">" + title + "</circle>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

std::string scatter_svg(const std::vector<std::string>& ids, const Eigen::MatrixXd& xy) {
  if (xy.cols() < 2) throw std::runtime_error("scatter plot needs two coordinate columns");
  if (static_cast<Eigen::Index>(ids.size()) != xy.rows())
    throw std::runtime_error("scatter plot id count does not match coordinates");

  double min_x = 0.0, max_x = 1.0, min_y = 0.0, max_y = 1.0;
  if (xy.rows() > 0) {
    min_x = xy.col(0).minCoeff();
    max_x = xy.col(0).maxCoeff();
    min_y = xy.col(1).minCoeff();
    max_y = xy.col(1).maxCoeff();
  }
  const double pad_x = std::max((max_x - min_x) * 0.05, 1e-9);
  const double pad_y = std::max((max_y - min_y) * 0.05, 1e-9);
  min_x -= pad_x;
  max_x += pad_x;
  min_y -= pad_y;
  max_y += pad_y;

  auto px = [&](double x) { return kMargin + (x - min_x) / (max_x - min_x) * kPlotSize; };
  auto py = [&](double y) { return kMargin + (max_y - y) / (max_y - min_y) * kPlotSize; };

  std::string out = svg_header();
  out += axes_box();
  out += "  <text x=\"" + num(kMargin) + "\" y=\"" + num(kMargin + kPlotSize + 18) +
         "\" font-size=\"12\">" + num(min_x) + "</text>\n";
  out += "  <text x=\"" + num(kMargin + kPlotSize) + "\" y=\"" + num(kMargin + kPlotSize + 18) +
         "\" font-size=\"12\" text-anchor=\"end\">" + num(max_x) + "</text>\n";
  out += "  <text x=\"" + num(kMargin - 8) + "\" y=\"" + num(kMargin + kPlotSize) +
         "\" font-size=\"12\" text-anchor=\"end\">" + num(min_y) + "</text>\n";
  out += "  <text x=\"" + num(kMargin - 8) + "\" y=\"" + num(kMargin + 10) +
         "\" font-size=\"12\" text-anchor=\"end\">" + num(max_y) + "</text>\n";

  for (Eigen::Index i = 0; i < xy.rows(); ++i) {
    out += "  <circle cx=\"" + num(px(xy(i, 0))) + "\" cy=\"" + num(py(xy(i, 1))) +
           "\" r=\"4\" fill=\"steelblue\"><title>" + xml_escape(ids[i]) + "</title></circle>\n";
  }
  out += "</svg>\n";
  return out;
}

} // namespace topodem
