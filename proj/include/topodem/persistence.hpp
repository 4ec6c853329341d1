#pragma once

#include <optional>
#include <string>
#include <vector>

#include "topodem/dual_graph.hpp"

namespace topodem {

/// One (birth, death) pair; death is +infinity until the diagram is capped.
struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
  std::string birth_vertex;
  bool essential = false;
};

bool operator==(const DiagramPoint& a, const DiagramPoint& b);

/// Multiset of diagram points in canonical (birth, death, birth_vertex) order.
/// `cap` records the finite value substituted for infinity, once applied.
struct PersistenceDiagram {
  std::string region_id;
  std::optional<double> cap;
  std::vector<DiagramPoint> points;

  bool is_capped() const; // no infinite death present
};

bool operator==(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// Sorts points by (birth, death, birth_vertex) with infinite deaths last.
void canonicalize(PersistenceDiagram& diagram);

/// 0-dimensional persistence of the sublevel-set filtration of the graph.
/// Vertices are processed in (filtration, non-imputed-first, id) order; when
/// two components merge, the one with the larger (birth, birth-order) key
/// dies (elder rule). Zero-persistence merges emit no point. Each connected
/// component contributes one essential point with infinite death.
PersistenceDiagram sublevel_diagram(const DualGraph& graph, std::string region_id = {});

/// Replaces every infinite death by `cap`. Fails if any finite death or
/// essential birth exceeds the cap.
PersistenceDiagram cap_infinite(PersistenceDiagram diagram, double cap = 1.0);

} // namespace topodem
