#pragma once

#include <string>
#include <vector>

#include "topodem/analytics.hpp"
#include "topodem/clustering.hpp"
#include "topodem/dual_graph.hpp"
#include "topodem/persistence.hpp"

namespace topodem {

/// GeoJSON property names carrying the unit id and population counts.
struct FieldNames {
  std::string id = "id";
  std::string total = "pop";
  std::string group = "group";
};

/// Parses a GeoJSON FeatureCollection of Polygon / MultiPolygon features.
std::vector<UnitRecord> read_geojson_units(const std::string& geojson_text,
                                           const FieldNames& fields);

/// Graph JSON: vertices sorted by id, edges sorted with the smaller id first.
std::string write_graph_json(const DualGraph& graph);
DualGraph read_graph_json(const std::string& text);

/// Diagram JSON with canonical point order; "inf" stands for infinite death.
std::string write_diagram_json(const PersistenceDiagram& diagram);
PersistenceDiagram read_diagram_json(const std::string& text);

/// Matrix CSV: header row of ids, then one row per id with full precision.
std::string write_matrix_csv(const DistanceMatrix& matrix);
DistanceMatrix read_matrix_csv(const std::string& text);

std::string write_embedding_csv(const Embedding& embedding);
Embedding read_embedding_csv(const std::string& text);

std::string write_outlier_csv(const OutlierReport& report);

/// Cluster JSON: labels keyed by region id, means serialized inline.
std::string write_cluster_json(const ClusterResult& result,
                               const std::vector<std::string>& ids);

std::string write_elbow_csv(const std::vector<std::pair<int, double>>& curve);

/// Attribute CSV rows of unit_id,total_pop,group_pop; a header is optional.
AttributeTable read_attribute_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace topodem
