#include "topodem/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "topodem/wasserstein.hpp"

namespace topodem {

namespace {

void require_square_distance(const DistanceMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.ids.size());
  if (m.values.rows() != n || m.values.cols() != n)
    throw std::runtime_error("distance matrix size does not match its id list");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (m.values(i, j) < 0.0)
        throw std::runtime_error("distance matrix has a negative entry");
      if (std::abs(m.values(i, j) - m.values(j, i)) > 1e-12)
        throw std::runtime_error("distance matrix is not symmetric");
    }
}

} // namespace

DistanceMatrix distance_matrix(const std::vector<PersistenceDiagram>& diagrams, double p) {
  const auto n = static_cast<Eigen::Index>(diagrams.size());
  if (n < 2) throw std::runtime_error("at least 2 diagrams required");
  std::set<std::string> seen;
  for (const auto& d : diagrams)
    if (!seen.insert(d.region_id).second)
      throw std::runtime_error("duplicate region id '" + d.region_id + "'");

  DistanceMatrix out;
  out.order_p = p;
  out.ids.reserve(diagrams.size());
  for (const auto& d : diagrams) out.ids.push_back(d.region_id);
  out.values = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double w = wasserstein(diagrams[i], diagrams[j], p);
      out.values(i, j) = w;
      out.values(j, i) = w;
    }
  return out;
}

Embedding classical_mds(const DistanceMatrix& matrix, int dim) {
  require_square_distance(matrix);
  const Eigen::Index n = matrix.values.rows();
  if (n < dim + 1) throw std::runtime_error("classical_mds needs at least dim+1 points");

  const Eigen::MatrixXd d2 = matrix.values.array().square();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / double(n));
  Eigen::MatrixXd gram = -0.5 * centering * d2 * centering;
  gram = 0.5 * (gram + gram.transpose()).eval(); // symmetrize against round-off

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");

  // Eigenvalues come out ascending; take the top `dim` in descending order.
  // Values within round-off of zero are truncated along with the negatives,
  // so degenerate directions do not leak sqrt(noise) into coordinates.
  const double noise_floor =
      1e-12 * std::max(std::abs(solver.eigenvalues()(0)),
                       std::abs(solver.eigenvalues()(n - 1)));
  Embedding embedding;
  embedding.ids = matrix.ids;
  embedding.coordinates = Eigen::MatrixXd::Zero(n, dim);
  for (int c = 0; c < dim; ++c) {
    const Eigen::Index idx = n - 1 - c;
    double lambda = solver.eigenvalues()(idx);
    lambda = lambda > noise_floor ? lambda : 0.0;
    Eigen::VectorXd column = solver.eigenvectors().col(idx) * std::sqrt(lambda);
    Eigen::Index largest = 0;
    for (Eigen::Index r = 1; r < n; ++r)
      if (std::abs(column(r)) > std::abs(column(largest))) largest = r;
    if (column(largest) < 0.0) column = -column;
    embedding.coordinates.col(c) = column;
  }
  return embedding;
}

Eigen::VectorXd lof_scores(const DistanceMatrix& matrix, int k) {
  require_square_distance(matrix);
  const Eigen::Index n = matrix.values.rows();
  if (k < 1 || k > n - 1)
    throw std::runtime_error("lof neighbor count k must be in [1, n-1]");

  constexpr double kReachFloor = 1e-12;
  std::vector<double> k_distance(n);
  std::vector<std::vector<Eigen::Index>> neighbors(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    std::vector<double> dists;
    dists.reserve(n - 1);
    for (Eigen::Index b = 0; b < n; ++b)
      if (b != a) dists.push_back(matrix.values(a, b));
    std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
    k_distance[a] = dists[k - 1];
    for (Eigen::Index b = 0; b < n; ++b)
      if (b != a && matrix.values(a, b) <= k_distance[a]) neighbors[a].push_back(b);
  }

  Eigen::VectorXd lrd(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    double reach_sum = 0.0;
    for (Eigen::Index b : neighbors[a])
      reach_sum += std::max({k_distance[b], matrix.values(a, b), kReachFloor});
    lrd(a) = static_cast<double>(neighbors[a].size()) / reach_sum;
  }

  Eigen::VectorXd lof(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    double ratio_sum = 0.0;
    for (Eigen::Index b : neighbors[a]) ratio_sum += lrd(b) / lrd(a);
    lof(a) = ratio_sum / static_cast<double>(neighbors[a].size());
  }
  return lof;
}

OutlierReport averaged_lof(const DistanceMatrix& matrix, int k_min, int k_max, double epsilon) {
  const Eigen::Index n = matrix.values.rows();
  if (k_min < 1 || k_max < k_min)
    throw std::runtime_error("invalid lof k range");
  if (n <= k_max)
    throw std::runtime_error("corpus of " + std::to_string(n) +
                             " diagrams is too small for k_max " + std::to_string(k_max) +
                             "; use a smaller k range");

  OutlierReport report;
  report.ids = matrix.ids;
  report.epsilon = epsilon;
  report.mean_lof = Eigen::VectorXd::Zero(n);
  for (int k = k_min; k <= k_max; ++k) report.mean_lof += lof_scores(matrix, k);
  report.mean_lof /= static_cast<double>(k_max - k_min + 1);
  report.flags.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) report.flags[i] = report.mean_lof(i) >= epsilon;
  return report;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::runtime_error("pearson_r needs two equal-length series of size >= 2");
  const double n = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::runtime_error("pearson_r undefined for zero-variance input");
  return sxy / std::sqrt(sxx * syy);
}

double dissimilarity_index(const AttributeTable& table) {
  long long group_total = 0, complement_total = 0;
  for (const auto& row : table) {
    if (row.total_pop < 0 || row.group_pop < 0 || row.group_pop > row.total_pop)
      throw std::runtime_error("invalid population counts for unit '" + row.id + "'");
    group_total += row.group_pop;
    complement_total += row.total_pop - row.group_pop;
  }
  if (group_total == 0 || complement_total == 0)
    throw std::runtime_error("dissimilarity index undefined: a group has zero total population");

  double sum = 0.0;
  for (const auto& row : table) {
    const double g = static_cast<double>(row.group_pop) / static_cast<double>(group_total);
    const double w = static_cast<double>(row.total_pop - row.group_pop) /
                     static_cast<double>(complement_total);
    sum += std::abs(g - w);
  }
  return 0.5 * sum;
}

} // namespace topodem
