#pragma once

#include <limits>
#include <vector>

#include "topodem/persistence.hpp"

namespace topodem {

/// Order value standing for p = infinity.
inline constexpr double kInfinityOrder = std::numeric_limits<double>::infinity();

/// Partial bijection between two diagrams: matched index pairs plus the
/// indices matched to the diagonal on each side.
struct Matching {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> unmatched_p;
  std::vector<int> unmatched_q;
};

/// d_p((b,d),(b',d')) = (|b-b'|^p + |d-d'|^p)^(1/p); max norm for p = inf.
double ground_distance(const DiagramPoint& a, const DiagramPoint& b, double p);

/// Distance from a point to the diagonal: ((d-b)/2) * 2^(1/p).
double diagonal_cost(const DiagramPoint& a, double p);

/// Exact p-Wasserstein distance between capped diagrams, computed by a
/// minimum-cost perfect matching on the diagonally augmented cost matrix.
/// p = kInfinityOrder gives the bottleneck distance.
double wasserstein(const PersistenceDiagram& P, const PersistenceDiagram& Q, double p);
double wasserstein(const PersistenceDiagram& P, const PersistenceDiagram& Q, double p,
                   Matching& matching);

/// Bottleneck (infinity-Wasserstein) distance between capped diagrams.
double bottleneck(const PersistenceDiagram& P, const PersistenceDiagram& Q);
double bottleneck(const PersistenceDiagram& P, const PersistenceDiagram& Q, Matching& matching);

/// Sum of lifespans d - b over all points; requires a capped diagram.
double total_persistence(const PersistenceDiagram& P);

} // namespace topodem
