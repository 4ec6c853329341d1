#include "topodem/wasserstein.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topodem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_capped(const PersistenceDiagram& d) {
  if (!d.is_capped())
    throw std::runtime_error("diagram '" + d.region_id +
                             "' has infinite deaths; apply cap_infinite first");
}

// |db|^p + |dd|^p, the p-th power of the ground distance.
double pair_cost_pow(const DiagramPoint& a, const DiagramPoint& b, double p) {
  const double db = std::abs(a.birth - b.birth);
  const double dd = std::abs(a.death - b.death);
  if (p == 1.0) return db + dd;
  if (p == 2.0) return db * db + dd * dd;
  return std::pow(db, p) + std::pow(dd, p);
}

// 2 * ((d-b)/2)^p, the p-th power of the diagonal cost.
double diag_cost_pow(const DiagramPoint& a, double p) {
  const double gap = a.death - a.birth;
  if (p == 1.0) return gap;
  const double half = gap / 2.0;
  if (p == 2.0) return 2.0 * half * half;
  return 2.0 * std::pow(half, p);
}

double apply_root(double total, double p) {
  if (p == 1.0) return total;
  if (p == 2.0) return std::sqrt(total);
  return std::pow(total, 1.0 / p);
}

// Minimum-cost perfect assignment on a square matrix via shortest augmenting
// paths with potentials. Returns the column assigned to each row; the total
// is re-accumulated from the assignment so it is an exact sum of entries.
double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>& col_of_row) {
  const int n = static_cast<int>(cost.rows());
  col_of_row.assign(n, -1);
  if (n == 0) return 0.0;

  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) col_of_row[p[j] - 1] = j - 1;
  double total = 0.0;
  for (int i = 0; i < n; ++i) total += cost(i, col_of_row[i]);
  return total;
}

Matching matching_from_assignment(const std::vector<int>& col_of_row, int n, int m) {
  Matching match;
  for (int i = 0; i < n; ++i) {
    if (col_of_row[i] < m)
      match.pairs.emplace_back(i, col_of_row[i]);
    else
      match.unmatched_p.push_back(i);
  }
  for (int r = n; r < n + m; ++r)
    if (col_of_row[r] < m) match.unmatched_q.push_back(col_of_row[r]);
  std::sort(match.unmatched_q.begin(), match.unmatched_q.end());
  return match;
}

// Bipartite feasibility at threshold lambda for the bottleneck search:
// left side = P points plus m diagonal slots, right side = Q points plus n
// diagonal slots. Kuhn's augmenting-path matching.
class BottleneckMatcher {
 public:
  BottleneckMatcher(const PersistenceDiagram& P, const PersistenceDiagram& Q)
      : P_(P.points), Q_(Q.points), n_(static_cast<int>(P.points.size())),
        m_(static_cast<int>(Q.points.size())) {}

  bool feasible(double lambda, std::vector<int>& match_left) {
    lambda_ = lambda;
    const int total = n_ + m_;
    match_left.assign(total, -1);
    match_right_.assign(total, -1);
    for (int l = 0; l < total; ++l) {
      visited_.assign(total, 0);
      if (!augment(l, match_left)) return false;
    }
    return true;
  }

 private:
  bool allowed(int l, int r) const {
    if (l < n_) {
      if (r < m_) return ground_distance(P_[l], Q_[r], kInfinityOrder) <= lambda_;
      return diagonal_cost(P_[l], kInfinityOrder) <= lambda_;
    }
    if (r < m_) return diagonal_cost(Q_[r], kInfinityOrder) <= lambda_;
    return true; // diagonal to diagonal
  }

  bool augment(int l, std::vector<int>& match_left) {
    for (int r = 0; r < n_ + m_; ++r) {
      if (visited_[r] || !allowed(l, r)) continue;
      visited_[r] = 1;
      if (match_right_[r] == -1 || augment(match_right_[r], match_left)) {
        match_right_[r] = l;
        match_left[l] = r;
        return true;
      }
    }
    return false;
  }

  const std::vector<DiagramPoint>& P_;
  const std::vector<DiagramPoint>& Q_;
  int n_, m_;
  double lambda_ = 0.0;
  std::vector<int> match_right_;
  std::vector<char> visited_;
};

double bottleneck_impl(const PersistenceDiagram& P, const PersistenceDiagram& Q,
                       Matching* matching) {
  require_capped(P);
  require_capped(Q);
  const int n = static_cast<int>(P.points.size());
  const int m = static_cast<int>(Q.points.size());

  std::vector<double> candidates{0.0};
  for (const auto& a : P.points) {
    candidates.push_back(diagonal_cost(a, kInfinityOrder));
    for (const auto& b : Q.points) candidates.push_back(ground_distance(a, b, kInfinityOrder));
  }
  for (const auto& b : Q.points) candidates.push_back(diagonal_cost(b, kInfinityOrder));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  BottleneckMatcher matcher(P, Q);
  std::vector<int> match_left;
  // Smallest candidate admitting a perfect matching; the largest always does.
  int lo = 0, hi = static_cast<int>(candidates.size()) - 1;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (matcher.feasible(candidates[mid], match_left))
      hi = mid;
    else
      lo = mid + 1;
  }
  const double value = candidates[lo];
  if (matching != nullptr) {
    matcher.feasible(value, match_left);
    matching->pairs.clear();
    matching->unmatched_p.clear();
    matching->unmatched_q.clear();
    std::vector<char> q_matched(m, 0);
    for (int l = 0; l < n; ++l) {
      if (match_left[l] < m) {
        matching->pairs.emplace_back(l, match_left[l]);
        q_matched[match_left[l]] = 1;
      } else {
        matching->unmatched_p.push_back(l);
      }
    }
    for (int j = 0; j < m; ++j)
      if (!q_matched[j]) matching->unmatched_q.push_back(j);
  }
  return value;
}

double wasserstein_impl(const PersistenceDiagram& P, const PersistenceDiagram& Q, double p,
                        Matching* matching) {
  if (std::isinf(p)) return bottleneck_impl(P, Q, matching);
  if (!(p >= 1.0)) throw std::runtime_error("wasserstein order p must be >= 1");
  require_capped(P);
  require_capped(Q);

  const int n = static_cast<int>(P.points.size());
  const int m = static_cast<int>(Q.points.size());
  const int size = n + m;
  if (size == 0) {
    if (matching != nullptr) *matching = {};
    return 0.0;
  }

  // Rows: P points then m diagonal slots. Columns: Q points then n slots.
  // A diagonal slot absorbs any point at that point's own diagonal cost.
  Eigen::MatrixXd cost(size, size);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) cost(i, j) = pair_cost_pow(P.points[i], Q.points[j], p);
    const double diag = diag_cost_pow(P.points[i], p);
    for (int j = m; j < size; ++j) cost(i, j) = diag;
  }
  for (int i = n; i < size; ++i) {
    for (int j = 0; j < m; ++j) cost(i, j) = diag_cost_pow(Q.points[j], p);
    for (int j = m; j < size; ++j) cost(i, j) = 0.0;
  }

  std::vector<int> col_of_row;
  const double total = solve_assignment(cost, col_of_row);
  if (matching != nullptr) *matching = matching_from_assignment(col_of_row, n, m);
  return apply_root(total, p);
}

} // namespace

double ground_distance(const DiagramPoint& a, const DiagramPoint& b, double p) {
  const double db = std::abs(a.birth - b.birth);
  const double dd = std::abs(a.death - b.death);
  if (std::isinf(p)) return std::max(db, dd);
  if (!(p >= 1.0)) throw std::runtime_error("ground distance order p must be >= 1");
  if (p == 1.0) return db + dd;
  if (p == 2.0) return std::hypot(db, dd);
  return std::pow(std::pow(db, p) + std::pow(dd, p), 1.0 / p);
}

double diagonal_cost(const DiagramPoint& a, double p) {
  const double half_gap = (a.death - a.birth) / 2.0;
  if (std::isinf(p)) return half_gap;
  if (!(p >= 1.0)) throw std::runtime_error("diagonal cost order p must be >= 1");
  return half_gap * std::pow(2.0, 1.0 / p);
}

double wasserstein(const PersistenceDiagram& P, const PersistenceDiagram& Q, double p) {
  return wasserstein_impl(P, Q, p, nullptr);
}

double wasserstein(const PersistenceDiagram& P, const PersistenceDiagram& Q, double p,
                   Matching& matching) {
  return wasserstein_impl(P, Q, p, &matching);
}

double bottleneck(const PersistenceDiagram& P, const PersistenceDiagram& Q) {
  return bottleneck_impl(P, Q, nullptr);
}

double bottleneck(const PersistenceDiagram& P, const PersistenceDiagram& Q, Matching& matching) {
  return bottleneck_impl(P, Q, &matching);
}

double total_persistence(const PersistenceDiagram& P) {
  require_capped(P);
  double total = 0.0;
  for (const auto& pt : P.points) total += pt.death - pt.birth;
  return total;
}

} // namespace topodem
