#include "topodem/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace topodem {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool point_less(const DiagramPoint& a, const DiagramPoint& b) {
  return std::tie(a.birth, a.death, a.birth_vertex) < std::tie(b.birth, b.death, b.birth_vertex);
}
} // namespace

bool operator==(const DiagramPoint& a, const DiagramPoint& b) {
  return a.birth == b.birth && a.death == b.death && a.birth_vertex == b.birth_vertex &&
         a.essential == b.essential;
}

bool operator==(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  return a.points == b.points;
}

bool PersistenceDiagram::is_capped() const {
  return std::none_of(points.begin(), points.end(),
                      [](const DiagramPoint& p) { return std::isinf(p.death); });
}

void canonicalize(PersistenceDiagram& diagram) {
  std::sort(diagram.points.begin(), diagram.points.end(), point_less);
}

PersistenceDiagram sublevel_diagram(const DualGraph& graph, std::string region_id) {
  const int n = static_cast<int>(graph.vertices.size());
  if (n == 0) throw std::runtime_error("empty graph");

  // Processing order: (filtration, non-imputed first, id). Vertices are
  // already sorted by id, so a stable sort on the first two keys suffices.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& va = graph.vertices[a];
    const auto& vb = graph.vertices[b];
    return std::tie(va.filtration, va.imputed) < std::tie(vb.filtration, vb.imputed);
  });
  std::vector<int> rank(n);
  for (int r = 0; r < n; ++r) rank[order[r]] = r;

  const auto adj = graph.neighbor_lists();

  std::vector<int> parent(n, -1);
  std::vector<double> birth(n);      // per root: birth value of the component
  std::vector<int> birth_rank(n);    // per root: processing rank of the birth vertex
  std::vector<int> birth_vertex(n);  // per root: index of the birth vertex
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  PersistenceDiagram diagram;
  diagram.region_id = std::move(region_id);

  for (int r = 0; r < n; ++r) {
    const int v = order[r];
    const double value = graph.vertices[v].filtration;
    parent[v] = v;
    birth[v] = value;
    birth_rank[v] = r;
    birth_vertex[v] = v;
    for (int u : adj[v]) {
      if (parent[u] == -1) continue; // not yet in the sublevel set
      int ru = find(u), rv = find(v);
      if (ru == rv) continue;
      // Elder rule: the component with the larger (birth, birth-order) key dies.
      int elder = ru, younger = rv;
      if (std::tie(birth[rv], birth_rank[rv]) < std::tie(birth[ru], birth_rank[ru]))
        std::swap(elder, younger);
      if (value > birth[younger])
        diagram.points.push_back({birth[younger], value,
                                  graph.vertices[birth_vertex[younger]].id, false});
      parent[younger] = elder;
    }
  }

  for (int v = 0; v < n; ++v)
    if (find(v) == v)
      diagram.points.push_back({birth[v], kInf, graph.vertices[birth_vertex[v]].id, true});

  canonicalize(diagram);
  return diagram;
}

PersistenceDiagram cap_infinite(PersistenceDiagram diagram, double cap) {
  for (const auto& p : diagram.points) {
    if (!p.essential && p.death > cap)
      throw std::runtime_error("cap " + std::to_string(cap) + " is below finite death " +
                               std::to_string(p.death));
    if (p.essential && p.birth > cap)
      throw std::runtime_error("cap " + std::to_string(cap) + " is below essential birth " +
                               std::to_string(p.birth));
  }
  for (auto& p : diagram.points)
    if (p.essential) p.death = cap;
  diagram.cap = cap;
  canonicalize(diagram);
  return diagram;
}

} // namespace topodem
