// Command-line frontend for the demographic persistence pipeline:
// ingest -> diagram -> distances -> analytics -> clustering, plus SVG plots.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "topodem/analytics.hpp"
#include "topodem/clustering.hpp"
#include "topodem/dual_graph.hpp"
#include "topodem/format.hpp"
#include "topodem/io.hpp"
#include "topodem/persistence.hpp"
#include "topodem/svg.hpp"
#include "topodem/wasserstein.hpp"

namespace fs = std::filesystem;
using namespace topodem;

namespace {

double parse_order(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinityOrder;
  const double p = std::stod(text);
  if (!(p >= 1.0)) throw CLI::ValidationError("--p must be >= 1 or 'inf'");
  return p;
}

PersistenceDiagram load_capped_diagram(const std::string& path) {
  PersistenceDiagram diagram = read_diagram_json(read_file(path));
  if (!diagram.is_capped()) {
    std::cerr << "note: capping essential deaths at 1 for " << path << "\n";
    diagram = cap_infinite(diagram, 1.0);
  }
  return diagram;
}

// Loads every *.json diagram in a directory, capped, sorted by region id.
std::vector<PersistenceDiagram> load_diagram_dir(const std::string& dir) {
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());

  std::vector<PersistenceDiagram> diagrams;
  for (const auto& path : paths) {
    try {
      diagrams.push_back(load_capped_diagram(path.string()));
    } catch (const std::exception& e) {
      throw std::runtime_error("cannot read diagram '" + path.string() + "': " + e.what());
    }
  }
  std::sort(diagrams.begin(), diagrams.end(),
            [](const PersistenceDiagram& a, const PersistenceDiagram& b) {
              return a.region_id < b.region_id;
            });
  for (std::size_t i = 1; i < diagrams.size(); ++i)
    if (diagrams[i - 1].region_id == diagrams[i].region_id)
      throw std::runtime_error("duplicate region id '" + diagrams[i].region_id + "' in " + dir);
  if (diagrams.size() < 2)
    throw std::runtime_error("directory '" + dir + "' holds fewer than 2 diagram JSON files");
  return diagrams;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"topodem: persistence diagrams of demographic data over dual graphs"};
  app.require_subcommand(1);

  // ingest
  std::string in_path, out_path;
  FieldNames fields;
  std::string rule_name = "rook";
  long long impute_threshold = 10;
  auto* ingest = app.add_subcommand("ingest", "GeoJSON units -> dual graph JSON");
  ingest->add_option("--in", in_path, "GeoJSON FeatureCollection")->required();
  ingest->add_option("--out", out_path, "output graph JSON")->required();
  ingest->add_option("--id-field", fields.id, "property with the unit id");
  ingest->add_option("--pop-field", fields.total, "property with the total population");
  ingest->add_option("--group-field", fields.group, "property with the group population");
  ingest->add_option("--rule", rule_name, "adjacency rule: rook or queen")
      ->check(CLI::IsMember({"rook", "queen"}));
  ingest->add_option("--impute-threshold", impute_threshold,
                     "population below which a unit is treated as missing");

  // diagram
  std::string region_id;
  double cap_value = 0.0;
  bool cap_requested = false;
  auto* diagram_cmd = app.add_subcommand("diagram", "graph JSON -> persistence diagram JSON");
  diagram_cmd->add_option("--in", in_path, "graph JSON")->required();
  diagram_cmd->add_option("--out", out_path, "output diagram JSON")->required();
  diagram_cmd->add_option("--region", region_id, "region id (default: input file stem)");
  diagram_cmd->add_option("--cap", cap_value, "cap infinite deaths at this value")
      ->each([&](const std::string&) { cap_requested = true; });

  // stats
  auto* stats = app.add_subcommand("stats", "total persistence of a diagram");
  stats->add_option("--in", in_path, "diagram JSON")->required();

  // distance / change
  std::string second_path, order_text = "1";
  auto* distance = app.add_subcommand("distance", "W_p distance between two diagrams");
  distance->add_option("first", in_path, "diagram JSON")->required();
  distance->add_option("second", second_path, "diagram JSON")->required();
  distance->add_option("--p", order_text, "Wasserstein order (>=1 or 'inf')");
  auto* change = app.add_subcommand("change", "W_1 distance between two epochs of one region");
  change->add_option("first", in_path, "diagram JSON")->required();
  change->add_option("second", second_path, "diagram JSON")->required();

  // matrix
  std::string dir_path;
  auto* matrix_cmd = app.add_subcommand("matrix", "pairwise W_p matrix over a diagram directory");
  matrix_cmd->add_option("--dir", dir_path, "directory of diagram JSON files")->required();
  matrix_cmd->add_option("--out", out_path, "output matrix CSV")->required();
  matrix_cmd->add_option("--p", order_text, "Wasserstein order (>=1 or 'inf')");

  // mds
  int mds_dim = 2;
  auto* mds = app.add_subcommand("mds", "classical MDS embedding of a distance matrix");
  mds->add_option("--in", in_path, "matrix CSV")->required();
  mds->add_option("--out", out_path, "output coordinates CSV")->required();
  mds->add_option("--dim", mds_dim, "embedding dimension");

  // outliers
  int k_min = 10, k_max = 19;
  double epsilon = 2.0;
  auto* outliers = app.add_subcommand("outliers", "averaged-LOF outlier report");
  outliers->add_option("--in", in_path, "matrix CSV")->required();
  outliers->add_option("--out", out_path, "output report CSV")->required();
  outliers->add_option("--k-min", k_min, "smallest LOF neighborhood size");
  outliers->add_option("--k-max", k_max, "largest LOF neighborhood size");
  outliers->add_option("--eps", epsilon, "outlier threshold on the mean LOF");

  // cluster
  int k = 2;
  std::uint64_t seed = 0;
  auto* cluster = app.add_subcommand("cluster", "k-means of diagrams under W_2");
  cluster->add_option("--dir", dir_path, "directory of diagram JSON files")->required();
  cluster->add_option("--out", out_path, "output cluster JSON")->required();
  cluster->add_option("--k", k, "number of clusters")->required();
  cluster->add_option("--seed", seed, "random seed");

  // elbow
  int elbow_k_max = 8;
  auto* elbow = app.add_subcommand("elbow", "distortion vs k curve");
  elbow->add_option("--dir", dir_path, "directory of diagram JSON files")->required();
  elbow->add_option("--out", out_path, "output elbow CSV")->required();
  elbow->add_option("--k-max", elbow_k_max, "largest k (runs k = 1..k-max)");
  elbow->add_option("--seed", seed, "random seed");

  // di
  auto* di = app.add_subcommand("di", "dissimilarity index of an attribute CSV");
  di->add_option("--in", in_path, "CSV of unit_id,total_pop,group_pop")->required();

  // plot
  auto* plot = app.add_subcommand("plot", "SVG of a diagram JSON or coordinates CSV");
  plot->add_option("--in", in_path, "diagram JSON or coordinates CSV")->required();
  plot->add_option("--out", out_path, "output SVG")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      const auto units = read_geojson_units(read_file(in_path), fields);
      const AdjacencyRule rule =
          rule_name == "queen" ? AdjacencyRule::Queen : AdjacencyRule::Rook;
      const DualGraph graph = impute_low_population(build_dual_graph(units, rule),
                                                    impute_threshold);
      write_file(out_path, write_graph_json(graph));
      std::cout << graph.vertices.size() << " vertices, " << graph.edges.size() << " edges, "
                << graph.component_count << " components\n";
    } else if (*diagram_cmd) {
      const DualGraph graph = read_graph_json(read_file(in_path));
      if (region_id.empty()) region_id = fs::path(in_path).stem().string();
      PersistenceDiagram diagram = sublevel_diagram(graph, region_id);
      if (cap_requested) diagram = cap_infinite(diagram, cap_value);
      write_file(out_path, write_diagram_json(diagram));
      std::cout << diagram.points.size() << " points, " << graph.component_count
                << " essential\n";
    } else if (*stats) {
      std::cout << format_fixed(total_persistence(load_capped_diagram(in_path))) << "\n";
    } else if (*distance || *change) {
      const double p = *change ? 1.0 : parse_order(order_text);
      const PersistenceDiagram a = load_capped_diagram(in_path);
      const PersistenceDiagram b = load_capped_diagram(second_path);
      std::cout << format_fixed(wasserstein(a, b, p)) << "\n";
    } else if (*matrix_cmd) {
      const auto diagrams = load_diagram_dir(dir_path);
      const DistanceMatrix matrix = distance_matrix(diagrams, parse_order(order_text));
      write_file(out_path, write_matrix_csv(matrix));
      std::cout << matrix.ids.size() << " x " << matrix.ids.size() << " matrix\n";
    } else if (*mds) {
      const DistanceMatrix matrix = read_matrix_csv(read_file(in_path));
      write_file(out_path, write_embedding_csv(classical_mds(matrix, mds_dim)));
    } else if (*outliers) {
      const DistanceMatrix matrix = read_matrix_csv(read_file(in_path));
      const OutlierReport report = averaged_lof(matrix, k_min, k_max, epsilon);
      write_file(out_path, write_outlier_csv(report));
      int flagged = 0;
      for (bool f : report.flags) flagged += f ? 1 : 0;
      std::cout << flagged << " outliers\n";
    } else if (*cluster) {
      const auto diagrams = load_diagram_dir(dir_path);
      const ClusterResult result = kmeans_diagrams(diagrams, k, seed);
      std::vector<std::string> ids;
      for (const auto& d : diagrams) ids.push_back(d.region_id);
      write_file(out_path, write_cluster_json(result, ids));
      std::cout << "k=" << k << " distortion=" << format_sig(result.distortion) << " iterations="
                << result.iterations << "\n";
    } else if (*elbow) {
      const auto diagrams = load_diagram_dir(dir_path);
      std::vector<int> ks;
      for (int kk = 1; kk <= elbow_k_max; ++kk) ks.push_back(kk);
      write_file(out_path, write_elbow_csv(elbow_curve(diagrams, ks, seed)));
    } else if (*di) {
      std::cout << format_fixed(dissimilarity_index(read_attribute_csv(read_file(in_path))))
                << "\n";
    } else if (*plot) {
      const std::string content = read_file(in_path);
      std::string svg;
      if (fs::path(in_path).extension() == ".json") {
        svg = diagram_svg(read_diagram_json(content));
      } else {
        const Embedding embedding = read_embedding_csv(content);
        svg = scatter_svg(embedding.ids, embedding.coordinates);
      }
      write_file(out_path, svg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
