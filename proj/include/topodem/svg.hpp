#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "topodem/persistence.hpp"

namespace topodem {

/// Standalone SVG of a diagram on the unit square with the diagonal drawn;
/// essential points get a distinct marker and every marker carries a hover
/// title with its birth vertex.
std::string diagram_svg(const PersistenceDiagram& diagram);

/// Scatter plot of labeled planar points with hover titles.
std::string scatter_svg(const std::vector<std::string>& ids, const Eigen::MatrixXd& xy);

} // namespace topodem
