#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

#include "topodem/dual_graph.hpp"
#include "topodem/persistence.hpp"

namespace topodem {

/// Symmetric pairwise diagram distance matrix with its region identifiers.
struct DistanceMatrix {
  std::vector<std::string> ids;
  Eigen::MatrixXd values;
  double order_p = 1.0;
};

/// Planar (or higher) embedding of the region identifiers.
struct Embedding {
  std::vector<std::string> ids;
  Eigen::MatrixXd coordinates; // n x dim
};

struct OutlierReport {
  std::vector<std::string> ids;
  Eigen::VectorXd mean_lof;
  double epsilon = 2.0;
  std::vector<bool> flags;
};

/// W_p distances between all pairs; each unordered pair is computed once.
DistanceMatrix distance_matrix(const std::vector<PersistenceDiagram>& diagrams, double p);

/// Torgerson MDS: eigendecomposition of -1/2 J D^2 J, coordinates from the
/// top `dim` eigenpairs with negative eigenvalues truncated to zero. Each
/// coordinate column is flipped so its largest-magnitude entry is nonnegative.
Embedding classical_mds(const DistanceMatrix& matrix, int dim = 2);

/// Standard LOF scores from the distance matrix; neighbor ties at the
/// k-distance are all included.
Eigen::VectorXd lof_scores(const DistanceMatrix& matrix, int k);

/// Mean of lof_scores over k in [k_min, k_max]; flags scores >= epsilon.
OutlierReport averaged_lof(const DistanceMatrix& matrix, int k_min = 10, int k_max = 19,
                           double epsilon = 2.0);

/// Sample Pearson correlation coefficient.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Duncan dissimilarity index: 1/2 * sum |g_i/B - w_i/W|.
double dissimilarity_index(const AttributeTable& table);

} // namespace topodem
