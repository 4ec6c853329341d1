#include "topodem/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "topodem/format.hpp"

namespace topodem {

namespace {

using nlohmann::json;

std::string json_string_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream stream(text);
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string property_as_string(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number_unsigned()) return std::to_string(value.get<unsigned long long>());
  if (value.is_number_float()) return format_sig(value.get<double>());
  throw std::runtime_error("id property is neither a string nor a number");
}

long long property_as_count(const json& value, const std::string& field,
                            const std::string& unit_id) {
  if (value.is_number_integer()) return value.get<long long>();
  if (value.is_number_unsigned()) return static_cast<long long>(value.get<unsigned long long>());
  if (value.is_number_float()) {
    const double v = value.get<double>();
    if (v != std::floor(v))
      throw std::runtime_error("field '" + field + "' of unit '" + unit_id +
                               "' is not an integer count");
    return static_cast<long long>(v);
  }
  throw std::runtime_error("field '" + field + "' of unit '" + unit_id + "' is not numeric");
}

Ring parse_ring(const json& coords, const std::string& unit_id) {
  Ring ring;
  if (!coords.is_array())
    throw std::runtime_error("parse error: bad ring coordinates for unit '" + unit_id + "'");
  for (const auto& pt : coords) {
    if (!pt.is_array() || pt.size() < 2)
      throw std::runtime_error("parse error: bad coordinate pair for unit '" + unit_id + "'");
    ring.emplace_back(pt[0].get<double>(), pt[1].get<double>());
  }
  return ring;
}

double parse_death(const json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    throw std::runtime_error("unrecognized death value in diagram JSON");
  }
  return value.get<double>();
}

} // namespace

std::vector<UnitRecord> read_geojson_units(const std::string& geojson_text,
                                           const FieldNames& fields) {
  json doc = json::parse(geojson_text);
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
    throw std::runtime_error("input is not a GeoJSON FeatureCollection");
  if (!doc.contains("features") || !doc["features"].is_array())
    throw std::runtime_error("FeatureCollection has no features array");

  std::vector<UnitRecord> units;
  int index = 0;
  for (const auto& feature : doc["features"]) {
    const std::string fallback = "feature #" + std::to_string(index);
    ++index;
    if (!feature.contains("properties") || !feature["properties"].is_object())
      throw std::runtime_error("missing properties on " + fallback);
    const json& props = feature["properties"];
    if (!props.contains(fields.id))
      throw std::runtime_error("missing field '" + fields.id + "' on " + fallback);

    UnitRecord unit;
    unit.id = property_as_string(props[fields.id]);
    if (!props.contains(fields.total))
      throw std::runtime_error("missing field '" + fields.total + "' for unit '" + unit.id + "'");
    if (!props.contains(fields.group))
      throw std::runtime_error("missing field '" + fields.group + "' for unit '" + unit.id + "'");
    unit.total_pop = property_as_count(props[fields.total], fields.total, unit.id);
    unit.group_pop = property_as_count(props[fields.group], fields.group, unit.id);

    if (!feature.contains("geometry") || feature["geometry"].is_null())
      throw std::runtime_error("missing geometry for unit '" + unit.id + "'");
    const json& geom = feature["geometry"];
    const std::string type = geom.value("type", "");
    if (type == "Polygon") {
      for (const auto& ring : geom["coordinates"]) unit.rings.push_back(parse_ring(ring, unit.id));
    } else if (type == "MultiPolygon") {
      for (const auto& polygon : geom["coordinates"])
        for (const auto& ring : polygon) unit.rings.push_back(parse_ring(ring, unit.id));
    } else {
      throw std::runtime_error("unsupported geometry type '" + type + "' for unit '" + unit.id +
                               "'");
    }
    units.push_back(std::move(unit));
  }
  return units;
}

std::string write_graph_json(const DualGraph& graph) {
  std::string out = "{\"vertices\":[";
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) {
    const auto& v = graph.vertices[i];
    if (i > 0) out += ',';
    out += "{\"id\":" + json_string_escape(v.id);
    out += ",\"share\":" + format_sig(v.share);
    out += ",\"filtration\":" + format_sig(v.filtration);
    out += ",\"pop\":" + std::to_string(v.population);
    out += std::string(",\"imputed\":") + (v.imputed ? "true" : "false") + "}";
  }
  out += "],\"edges\":[";
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    if (e > 0) out += ',';
    out += "[" + json_string_escape(graph.vertices[graph.edges[e].first].id) + "," +
           json_string_escape(graph.vertices[graph.edges[e].second].id) + "]";
  }
  out += "]}\n";
  return out;
}

DualGraph read_graph_json(const std::string& text) {
  json doc = json::parse(text);
  DualGraph graph;
  for (const auto& v : doc.at("vertices")) {
    GraphVertex vertex;
    vertex.id = v.at("id").get<std::string>();
    vertex.share = v.at("share").get<double>();
    vertex.filtration = v.at("filtration").get<double>();
    vertex.population = v.at("pop").get<long long>();
    vertex.imputed = v.at("imputed").get<bool>();
    graph.vertices.push_back(std::move(vertex));
  }
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < graph.vertices.size(); ++i)
    index[graph.vertices[i].id] = static_cast<int>(i);
  for (const auto& e : doc.at("edges")) {
    const auto a = index.find(e.at(0).get<std::string>());
    const auto b = index.find(e.at(1).get<std::string>());
    if (a == index.end() || b == index.end())
      throw std::runtime_error("graph JSON edge references an unknown vertex");
    graph.edges.emplace_back(std::min(a->second, b->second), std::max(a->second, b->second));
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());
  graph.component_count =
      count_components(static_cast<int>(graph.vertices.size()), graph.edges);
  return graph;
}

std::string write_diagram_json(const PersistenceDiagram& diagram) {
  std::string out = "{\"region_id\":" + json_string_escape(diagram.region_id);
  out += ",\"cap\":" + (diagram.cap ? format_sig(*diagram.cap) : std::string("null"));
  out += ",\"points\":[";
  for (std::size_t i = 0; i < diagram.points.size(); ++i) {
    const auto& p = diagram.points[i];
    if (i > 0) out += ',';
    out += "{\"birth\":" + format_sig(p.birth);
    out += ",\"death\":" + (std::isinf(p.death) ? std::string("\"inf\"") : format_sig(p.death));
    out += ",\"birth_vertex\":" + json_string_escape(p.birth_vertex);
    out += std::string(",\"essential\":") + (p.essential ? "true" : "false") + "}";
  }
  out += "]}\n";
  return out;
}

PersistenceDiagram read_diagram_json(const std::string& text) {
  json doc = json::parse(text);
  PersistenceDiagram diagram;
  diagram.region_id = doc.at("region_id").get<std::string>();
  if (doc.contains("cap") && !doc["cap"].is_null()) diagram.cap = doc["cap"].get<double>();
  for (const auto& p : doc.at("points")) {
    DiagramPoint point;
    point.birth = p.at("birth").get<double>();
    point.death = parse_death(p.at("death"));
    point.birth_vertex = p.value("birth_vertex", "");
    point.essential = p.value("essential", false);
    diagram.points.push_back(std::move(point));
  }
  canonicalize(diagram);
  return diagram;
}

std::string write_matrix_csv(const DistanceMatrix& matrix) {
  std::string out = "id";
  for (const auto& id : matrix.ids) out += "," + csv_escape(id);
  out += '\n';
  for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) {
    out += csv_escape(matrix.ids[i]);
    for (Eigen::Index j = 0; j < matrix.values.cols(); ++j)
      out += "," + format_full(matrix.values(i, j));
    out += '\n';
  }
  return out;
}

DistanceMatrix read_matrix_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw std::runtime_error("matrix CSV has no data rows");
  const auto header = split_csv_line(lines[0]);
  const std::size_t n = header.size() - 1;
  if (lines.size() - 1 != n) throw std::runtime_error("matrix CSV is not square");

  DistanceMatrix matrix;
  matrix.ids.assign(header.begin() + 1, header.end());
  matrix.values = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fields = split_csv_line(lines[i + 1]);
    if (fields.size() != n + 1) throw std::runtime_error("matrix CSV row has wrong arity");
    if (fields[0] != matrix.ids[i])
      throw std::runtime_error("matrix CSV row label does not match header order");
    for (std::size_t j = 0; j < n; ++j)
      matrix.values(i, j) = std::stod(fields[j + 1]);
  }
  return matrix;
}

std::string write_embedding_csv(const Embedding& embedding) {
  std::string out = "id";
  const Eigen::Index dim = embedding.coordinates.cols();
  if (dim == 2) {
    out += ",x,y";
  } else {
    for (Eigen::Index c = 0; c < dim; ++c) out += ",c" + std::to_string(c);
  }
  out += '\n';
  for (Eigen::Index i = 0; i < embedding.coordinates.rows(); ++i) {
    out += csv_escape(embedding.ids[i]);
    for (Eigen::Index c = 0; c < dim; ++c)
      out += "," + format_sig(embedding.coordinates(i, c));
    out += '\n';
  }
  return out;
}

Embedding read_embedding_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw std::runtime_error("embedding CSV has no data rows");
  const auto header = split_csv_line(lines[0]);
  const Eigen::Index dim = static_cast<Eigen::Index>(header.size()) - 1;
  Embedding embedding;
  embedding.coordinates = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(lines.size()) - 1, dim);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_csv_line(lines[i]);
    if (static_cast<Eigen::Index>(fields.size()) != dim + 1)
      throw std::runtime_error("embedding CSV row has wrong arity");
    embedding.ids.push_back(fields[0]);
    for (Eigen::Index c = 0; c < dim; ++c)
      embedding.coordinates(static_cast<Eigen::Index>(i) - 1, c) = std::stod(fields[c + 1]);
  }
  return embedding;
}

std::string write_outlier_csv(const OutlierReport& report) {
  std::string out = "id,mean_lof,is_outlier\n";
  for (std::size_t i = 0; i < report.ids.size(); ++i) {
    out += csv_escape(report.ids[i]);
    out += "," + format_sig(report.mean_lof(static_cast<Eigen::Index>(i)));
    out += report.flags[i] ? ",true\n" : ",false\n";
  }
  return out;
}

std::string write_cluster_json(const ClusterResult& result,
                               const std::vector<std::string>& ids) {
  std::string out = "{\"k\":" + std::to_string(result.means.size());
  out += ",\"seed\":" + std::to_string(result.seed);
  out += ",\"distortion\":" + format_sig(result.distortion);
  out += ",\"labels\":{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ',';
    out += json_string_escape(ids[i]) + ":" + std::to_string(result.labels[i]);
  }
  out += "},\"means\":[";
  for (std::size_t j = 0; j < result.means.size(); ++j) {
    if (j > 0) out += ',';
    PersistenceDiagram mean = result.means[j];
    mean.region_id = "mean-" + std::to_string(j);
    std::string diagram = write_diagram_json(mean);
    if (!diagram.empty() && diagram.back() == '\n') diagram.pop_back();
    out += diagram;
  }
  out += "]}\n";
  return out;
}

std::string write_elbow_csv(const std::vector<std::pair<int, double>>& curve) {
  std::string out = "k,distortion\n";
  for (const auto& [k, distortion] : curve)
    out += std::to_string(k) + "," + format_sig(distortion) + "\n";
  return out;
}

AttributeTable read_attribute_csv(const std::string& text) {
  const auto lines = split_lines(text);
  AttributeTable table;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split_csv_line(lines[i]);
    if (fields.size() != 3)
      throw std::runtime_error("attribute CSV row " + std::to_string(i + 1) +
                               " must have unit_id,total_pop,group_pop");
    if (i == 0) {
      // Optional header: skip when the count columns are not numeric.
      char* end = nullptr;
      std::strtoll(fields[1].c_str(), &end, 10);
      if (end == fields[1].c_str() || *end != '\0') continue;
    }
    AttributeRow row;
    row.id = fields[0];
    row.total_pop = std::stoll(fields[1]);
    row.group_pop = std::stoll(fields[2]);
    table.push_back(std::move(row));
  }
  if (table.empty()) throw std::runtime_error("attribute CSV has no data rows");
  return table;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace topodem
