#include "topodem/dual_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace topodem {

namespace {

using SnapPoint = std::pair<std::int64_t, std::int64_t>;

struct SnapPointHash {
  std::size_t operator()(const SnapPoint& p) const {
    std::uint64_t h = static_cast<std::uint64_t>(p.first) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(p.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

using SnapSegment = std::pair<SnapPoint, SnapPoint>;

struct SnapSegmentHash {
  std::size_t operator()(const SnapSegment& s) const {
    SnapPointHash ph;
    std::size_t h = ph(s.first);
    h ^= ph(s.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

SnapPoint snap(const std::pair<double, double>& pt, double quantum) {
  return {static_cast<std::int64_t>(std::llround(pt.first / quantum)),
          static_cast<std::int64_t>(std::llround(pt.second / quantum))};
}

void validate_ring(const Ring& ring, const std::string& unit_id) {
  if (ring.size() < 4 || ring.front() != ring.back())
    throw std::runtime_error("parse error: ring not closed for unit '" + unit_id + "'");
  std::set<std::pair<double, double>> distinct(ring.begin(), ring.end() - 1);
  if (distinct.size() < 3)
    throw std::runtime_error("parse error: ring with fewer than 3 distinct points for unit '" +
                             unit_id + "'");
}

// Appends `unit` to the bucket for `key` unless it is already the last entry;
// units are processed one at a time so this dedupes per unit.
template <typename Map, typename Key>
void add_once(Map& map, const Key& key, int unit) {
  auto& bucket = map[key];
  if (bucket.empty() || bucket.back() != unit) bucket.push_back(unit);
}

} // namespace

std::vector<std::vector<int>> DualGraph::neighbor_lists() const {
  std::vector<std::vector<int>> adj(vertices.size());
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

int count_components(int vertex_count, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> parent(vertex_count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = vertex_count;
  for (const auto& [a, b] : edges) {
    int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return components;
}

std::map<std::string, double> compute_shares(const std::vector<UnitRecord>& units) {
  std::map<std::string, double> shares;
  for (const auto& u : units)
    if (u.total_pop > 0)
      shares[u.id] = static_cast<double>(u.group_pop) / static_cast<double>(u.total_pop);
  return shares;
}

DualGraph build_dual_graph(const std::vector<UnitRecord>& units, AdjacencyRule rule,
                           double snap_quantum) {
  if (units.empty()) throw std::runtime_error("input error: no units");

  std::vector<int> order(units.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return units[a].id < units[b].id; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (units[order[i - 1]].id == units[order[i]].id)
      throw std::runtime_error("input error: duplicate unit id '" + units[order[i]].id + "'");

  DualGraph graph;
  graph.vertices.reserve(units.size());
  for (int idx : order) {
    const UnitRecord& u = units[idx];
    if (u.total_pop < 0 || u.group_pop < 0)
      throw std::runtime_error("input error: negative population for unit '" + u.id + "'");
    if (u.group_pop > u.total_pop)
      throw std::runtime_error("input error: group population exceeds total for unit '" + u.id +
                               "'");
    GraphVertex v;
    v.id = u.id;
    v.population = u.total_pop;
    v.share = u.total_pop > 0
                  ? static_cast<double>(u.group_pop) / static_cast<double>(u.total_pop)
                  : 0.0;
    v.filtration = 1.0 - v.share;
    graph.vertices.push_back(std::move(v));
  }

  // Vertex index -> snapped boundary features, bucketed globally.
  std::unordered_map<SnapPoint, std::vector<int>, SnapPointHash> point_units;
  std::unordered_map<SnapSegment, std::vector<int>, SnapSegmentHash> segment_units;

  for (std::size_t vi = 0; vi < order.size(); ++vi) {
    const UnitRecord& u = units[order[vi]];
    std::set<SnapPoint> unit_points;
    std::set<SnapSegment> unit_segments;
    for (const Ring& ring : u.rings) {
      validate_ring(ring, u.id);
      std::vector<SnapPoint> snapped;
      snapped.reserve(ring.size());
      for (const auto& pt : ring) snapped.push_back(snap(pt, snap_quantum));
      for (const SnapPoint& p : snapped) unit_points.insert(p);
      for (std::size_t k = 0; k + 1 < snapped.size(); ++k) {
        SnapPoint a = snapped[k], b = snapped[k + 1];
        if (a == b) continue; // zero-length after snapping
        if (b < a) std::swap(a, b);
        unit_segments.insert({a, b});
      }
    }
    if (rule == AdjacencyRule::Queen)
      for (const SnapPoint& p : unit_points) add_once(point_units, p, static_cast<int>(vi));
    else
      for (const SnapSegment& s : unit_segments) add_once(segment_units, s, static_cast<int>(vi));
  }

  std::set<std::pair<int, int>> edge_set;
  auto connect_bucket = [&](const std::vector<int>& bucket) {
    for (std::size_t a = 0; a < bucket.size(); ++a)
      for (std::size_t b = a + 1; b < bucket.size(); ++b) {
        int lo = std::min(bucket[a], bucket[b]);
        int hi = std::max(bucket[a], bucket[b]);
        if (lo != hi) edge_set.insert({lo, hi});
      }
  };
  if (rule == AdjacencyRule::Queen)
    for (const auto& [key, bucket] : point_units) connect_bucket(bucket);
  else
    for (const auto& [key, bucket] : segment_units) connect_bucket(bucket);

  graph.edges.assign(edge_set.begin(), edge_set.end());
  graph.component_count = count_components(static_cast<int>(graph.vertices.size()), graph.edges);
  return graph;
}

DualGraph impute_low_population(const DualGraph& graph, long long threshold) {
  DualGraph out = graph;
  const auto adj = out.neighbor_lists();
  const int n = static_cast<int>(out.vertices.size());

  constexpr double kUnset = -1.0;
  for (int i = 0; i < n; ++i) {
    auto& v = out.vertices[i];
    v.imputed = v.population < threshold;
    if (v.imputed) v.share = kUnset;
  }

  // Vertices are stored in id order, so an index sweep is an id-order sweep.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      if (!out.vertices[i].imputed) continue;
      double best = kUnset;
      for (int j : adj[i]) best = std::max(best, out.vertices[j].share);
      if (best != kUnset && best != out.vertices[i].share) {
        out.vertices[i].share = best;
        changed = true;
      }
    }
  }

  for (auto& v : out.vertices) {
    if (v.share == kUnset) v.share = 0.0; // component with no populated vertex
    if (v.imputed) v.filtration = 1.0 - v.share;
  }
  return out;
}

AttributeTable attribute_table(const std::vector<UnitRecord>& units) {
  AttributeTable table;
  table.reserve(units.size());
  for (const auto& u : units) table.push_back({u.id, u.total_pop, u.group_pop});
  return table;
}

} // namespace topodem
