#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace topodem {

/// One polygon ring; the first and last coordinate pair must coincide.
using Ring = std::vector<std::pair<double, double>>;

/// A geographic unit with its population counts and boundary geometry.
struct UnitRecord {
  std::string id;
  long long total_pop = 0;
  long long group_pop = 0;
  std::vector<Ring> rings; // outer rings and holes from all polygons of the unit
};

enum class AdjacencyRule { Rook, Queen };

struct GraphVertex {
  std::string id;
  double share = 0.0;      // R(v), group population share in [0,1]
  double filtration = 1.0; // f(v) = 1 - R(v)
  long long population = 0;
  bool imputed = false;
};

/// Dual adjacency graph of a set of geographic units.
/// Vertices are sorted by id; edges are (i,j) index pairs with i < j,
/// sorted, with no duplicates or self-loops.
struct DualGraph {
  std::vector<GraphVertex> vertices;
  std::vector<std::pair<int, int>> edges;
  int component_count = 0;

  std::vector<std::vector<int>> neighbor_lists() const;
};

struct AttributeRow {
  std::string id;
  long long total_pop = 0;
  long long group_pop = 0;
};
using AttributeTable = std::vector<AttributeRow>;

/// Builds the dual graph: snaps boundary coordinates to a quantization grid
/// and connects units that share a boundary segment (rook) or at least one
/// boundary point (queen). Shares and filtration values are populated from
/// the raw population counts; run impute_low_population afterwards to apply
/// the low-population rule.
DualGraph build_dual_graph(const std::vector<UnitRecord>& units,
                           AdjacencyRule rule = AdjacencyRule::Rook,
                           double snap_quantum = 1e-7);

/// R(v) = group_pop / total_pop for every unit with total_pop > 0.
std::map<std::string, double> compute_shares(const std::vector<UnitRecord>& units);

/// Flags every vertex with population below `threshold` and assigns it the
/// highest share among its neighbors, sweeping in id order until no share
/// changes. A component made up entirely of low-population vertices gets
/// share 0. Filtration values are refreshed to 1 - share.
DualGraph impute_low_population(const DualGraph& graph, long long threshold = 10);

/// Number of connected components induced by the edge set.
int count_components(int vertex_count, const std::vector<std::pair<int, int>>& edges);

AttributeTable attribute_table(const std::vector<UnitRecord>& units);

} // namespace topodem
