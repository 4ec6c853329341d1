// Acceptance suite: checks every shipped guarantee end to end and prints one
// PASS/FAIL line per criterion. Exit code is the number of failures.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "topodem/analytics.hpp"
#include "topodem/clustering.hpp"
#include "topodem/io.hpp"
#include "topodem/persistence.hpp"
#include "topodem/wasserstein.hpp"

namespace fs = std::filesystem;
using namespace topodem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& note = "") {
  std::printf("%s %2d. %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              note.empty() ? "" : " -- ", note.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---- 1. persistence oracle equivalence -----------------------------------

void criterion_persistence_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260808);
  bool pass = true;
  for (int round = 0; round < 500 && pass; ++round) {
    const auto graph = oracles::random_graph(rng, 8, round % 2 == 0, true);
    const auto fast = sublevel_diagram(graph);
    const auto slow = oracles::sweep_diagram(graph);
    pass = fast.points == slow.points;
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 10.0;
  std::ostringstream note;
  note << "500 graphs in " << elapsed << " s";
  report(1, "persistence equals the threshold-sweep oracle", pass, note.str());
}

// ---- 2. wasserstein oracle equivalence ------------------------------------

void criterion_wasserstein_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(31);
  bool pass = true;
  const double orders[] = {1.0, 2.0, kInfinityOrder};
  for (int round = 0; round < 200 && pass; ++round) {
    const auto P = oracles::random_diagram(rng, 4, round % 2 == 0);
    const auto Q = oracles::random_diagram(rng, 4, round % 2 == 0);
    for (double p : orders)
      pass = pass &&
             std::abs(wasserstein(P, Q, p) - oracles::wasserstein_enumerated(P, Q, p)) <= 1e-9;
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 30.0;
  std::ostringstream note;
  note << "200 pairs x {1,2,inf} in " << elapsed << " s";
  report(2, "assignment solver equals partial-bijection enumeration", pass, note.str());
}

// ---- 3. metric axioms ------------------------------------------------------

void criterion_metric_axioms() {
  std::mt19937_64 rng(47);
  bool pass = true;
  const double orders[] = {1.0, 2.0, kInfinityOrder};
  for (int round = 0; round < 100 && pass; ++round) {
    const auto P = oracles::random_diagram(rng, 5, true);
    const auto Q = oracles::random_diagram(rng, 5, true);
    const auto R = oracles::random_diagram(rng, 5, true);
    for (double p : orders) {
      const double pq = wasserstein(P, Q, p);
      pass = pass && std::abs(pq - wasserstein(Q, P, p)) <= 1e-9;
      pass = pass && wasserstein(P, P, p) <= 1e-9;
      if (!(P == Q)) pass = pass && pq > 1e-9;
      pass = pass && wasserstein(P, R, p) <= pq + wasserstein(Q, R, p) + 1e-9;
    }
  }
  report(3, "symmetry, identity and triangle inequality at 1e-9", pass);
}

// ---- 4. integral identity --------------------------------------------------

void criterion_integral_identity() {
  std::mt19937_64 rng(59);
  bool pass = true;
  const PersistenceDiagram empty = oracles::make_diagram({});
  for (int round = 0; round < 100 && pass; ++round) {
    const auto graph = oracles::random_graph(rng, 8, round % 2 == 0, false);
    const auto capped = cap_infinite(sublevel_diagram(graph), 1.0);
    const double tp = total_persistence(capped);
    pass = std::abs(tp - oracles::component_count_integral(graph, 1.0)) <= 1e-12;
    pass = pass && tp == wasserstein(capped, empty, 1.0);
  }
  report(4, "total persistence equals the component-count integral and W1 to empty", pass);
}

// ---- 5. known tract share values ---------------------------------------------

void criterion_share_values() {
  auto unit = [](std::string id, long long total, long long group, double x) {
    UnitRecord u;
    u.id = std::move(id);
    u.total_pop = total;
    u.group_pop = group;
    u.rings.push_back({{x, 0}, {x + 1, 0}, {x + 1, 1}, {x, 1}, {x, 0}});
    return u;
  };
  const std::vector<UnitRecord> units = {unit("a", 2319, 2291, 0), unit("b", 11309, 7603, 1),
                                         unit("c", 1710, 1029, 2)};
  const DualGraph graph = build_dual_graph(units);
  bool pass = std::abs(graph.vertices[0].filtration - 0.0120741699008193) <= 1e-9;
  pass = pass && std::abs(graph.vertices[1].filtration - 0.3277035989035282) <= 1e-9;
  pass = pass && std::abs(graph.vertices[2].filtration - 0.3982456140350877) <= 1e-9;
  report(5, "share and filtration arithmetic on census-scale counts", pass);
}

// ---- 6. essential point count ----------------------------------------------

void criterion_essential_count() {
  std::mt19937_64 rng(71);
  bool pass = true;
  for (int round = 0; round < 100 && pass; ++round) {
    // Several blobs with no cross edges: a guaranteed-disconnected graph.
    auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const int blobs = 2 + static_cast<int>(unit() * 3);
    DualGraph graph;
    for (int b = 0; b < blobs; ++b) {
      const int size = 1 + static_cast<int>(unit() * 3);
      const int base = static_cast<int>(graph.vertices.size());
      for (int v = 0; v < size; ++v) {
        GraphVertex vert;
        vert.id = "v" + std::to_string(100 + base + v);
        vert.filtration = unit();
        vert.share = 1.0 - vert.filtration;
        vert.population = 100;
        graph.vertices.push_back(std::move(vert));
      }
      for (int v = base; v < base + size; ++v)
        for (int w = v + 1; w < base + size; ++w)
          if (unit() < 0.5) graph.edges.emplace_back(v, w);
    }
    graph.component_count =
        count_components(static_cast<int>(graph.vertices.size()), graph.edges);

    const auto diagram = sublevel_diagram(graph);
    int essentials = 0;
    for (const auto& p : diagram.points) essentials += p.essential ? 1 : 0;
    pass = essentials == graph.component_count && graph.component_count >= blobs;
  }
  report(6, "one essential point per connected component", pass);
}

// ---- 7. MDS round trip -----------------------------------------------------

void criterion_mds_round_trip() {
  std::mt19937_64 rng(83);
  auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const int n = 25;
  Eigen::MatrixXd points(n, 2);
  for (int i = 0; i < n; ++i) {
    points(i, 0) = unit() * 4.0;
    points(i, 1) = unit() * 4.0;
  }
  DistanceMatrix matrix;
  for (int i = 0; i < n; ++i) matrix.ids.push_back("p" + std::to_string(100 + i));
  matrix.values = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      matrix.values(i, j) = (points.row(i) - points.row(j)).norm();

  const Embedding embedding = classical_mds(matrix, 2);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = (embedding.coordinates.row(i) - embedding.coordinates.row(j)).norm();
      worst = std::max(worst, std::abs(d - matrix.values(i, j)));
    }
  std::ostringstream note;
  note << "max deviation " << worst;
  report(7, "classical MDS round-trips 25 planar points at 1e-6", worst <= 1e-6, note.str());
}

// ---- 8. planted outlier ----------------------------------------------------

void criterion_outlier_detection() {
  std::mt19937_64 rng(97);
  auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<PersistenceDiagram> diagrams;
  for (int i = 0; i < 30; ++i) {
    PersistenceDiagram d;
    d.region_id = "city" + std::to_string(100 + i);
    d.cap = 1.0;
    if (i == 17) {
      // Planted outlier: far from the template under W1.
      d.points.push_back({0.0, 1.0, "", false});
      d.points.push_back({0.0, 0.95, "", false});
      d.points.push_back({0.05, 0.9, "", false});
      d.points.push_back({0.5, 0.95, "", false});
      d.points.push_back({0.6, 0.9, "", false});
    } else {
      const double j1 = (unit() - 0.5) * 0.01;
      const double j2 = (unit() - 0.5) * 0.01;
      d.points.push_back({0.1 + j1, 0.9 + j2, "", false});
      d.points.push_back({0.2 + j2, 0.6 + j1, "", false});
      d.points.push_back({0.4 + j1, 0.5 + j2, "", false});
    }
    canonicalize(d);
    diagrams.push_back(std::move(d));
  }
  const DistanceMatrix matrix = distance_matrix(diagrams, 1.0);
  const OutlierReport reported = averaged_lof(matrix, 10, 19, 2.0);
  bool pass = true;
  for (int i = 0; i < 30; ++i) pass = pass && reported.flags[i] == (i == 17);
  report(8, "averaged LOF (k=10..19, eps=2) flags exactly the planted diagram", pass);
}

// ---- 9. clustering guarantees ----------------------------------------------

void criterion_clustering() {
  bool pass = true;
  std::string note;

  // Frechet mean of five identical diagrams is that diagram.
  const auto P = oracles::make_diagram({{0.1, 0.9}, {0.3, 0.5}, {0.2, 0.4}});
  const auto mean = frechet_mean(std::vector<PersistenceDiagram>(5, P), P);
  bool identical = mean.points.size() == P.points.size();
  for (std::size_t i = 0; identical && i < mean.points.size(); ++i)
    identical = mean.points[i].birth == P.points[i].birth &&
                mean.points[i].death == P.points[i].death;
  if (!identical) note += "[frechet fixed point] ";
  pass = pass && identical;

  // Planted two-cluster corpus with separation >= 10x the intra-cluster noise.
  std::mt19937_64 rng(20200229);
  auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<PersistenceDiagram> corpus;
  for (int i = 0; i < 24; ++i) {
    const double jitter = (unit() - 0.5) * 0.01;
    PersistenceDiagram d;
    if (i < 12)
      d = oracles::make_diagram({{0.45 + jitter, 0.55 + jitter}});
    else
      d = oracles::make_diagram(
          {{0.05 + jitter, 0.95}, {0.1, 0.85 + jitter}, {0.2 + jitter, 0.75}});
    d.region_id = "c" + std::to_string(100 + i);
    corpus.push_back(std::move(d));
  }
  double max_within = 0.0;
  double min_across = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 24; ++i)
    for (int j = i + 1; j < 24; ++j) {
      const double w = wasserstein(corpus[i], corpus[j], 2.0);
      if ((i < 12) == (j < 12))
        max_within = std::max(max_within, w);
      else
        min_across = std::min(min_across, w);
    }
  bool separated = min_across >= 10.0 * max_within;
  if (!separated) note += "[separation] ";
  pass = pass && separated;

  bool recovered = true;
  bool monotone = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ClusterResult result = kmeans_diagrams(corpus, 2, seed);
    for (int i = 1; i < 12; ++i) recovered &= result.labels[i] == result.labels[0];
    for (int i = 13; i < 24; ++i) recovered &= result.labels[i] == result.labels[12];
    recovered = recovered && result.labels[0] != result.labels[12];
    for (std::size_t t = 1; t < result.distortion_trace.size(); ++t)
      monotone &= result.distortion_trace[t] <= result.distortion_trace[t - 1] + 1e-9;
  }
  if (!recovered) note += "[planted labels] ";
  if (!monotone) note += "[monotone distortion] ";
  pass = pass && recovered && monotone;

  // k = n: every diagram is its own mean, distortion exactly zero.
  std::vector<PersistenceDiagram> distinct(corpus.begin(), corpus.begin() + 6);
  const ClusterResult full = kmeans_diagrams(distinct, 6, 9);
  const bool zero = full.distortion == 0.0;
  if (!zero) note += "[k=n distortion] ";
  pass = pass && zero;

  report(9, "clustering: fixed point, planted recovery, monotone distortion, k=n", pass, note);
}

// ---- 10. pipeline determinism ----------------------------------------------

std::string region_geojson(int region) {
  std::ostringstream out;
  out << "{\"type\":\"FeatureCollection\",\"features\":[";
  bool first = true;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y) {
      long long pop = 50 + ((x * 7 + y * 13 + region * 31) % 400);
      if ((x + 2 * y + region) % 11 == 0) pop = 3; // occasional low-population tract
      const long long group = (pop * ((x + y + region) % 10)) / 12;
      if (!first) out << ",";
      first = false;
      out << "{\"type\":\"Feature\",\"properties\":{\"id\":\"t" << x << y
          << "\",\"pop\":" << pop << ",\"group\":" << group
          << "},\"geometry\":{\"type\":\"Polygon\",\"coordinates\":[[[" << x << "," << y
          << "],[" << x + 1 << "," << y << "],[" << x + 1 << "," << y + 1 << "],[" << x << ","
          << y + 1 << "],[" << x << "," << y << "]]]}}";
    }
  out << "]}";
  return out.str();
}

int run_cli(const std::string& args, const fs::path& log_dir) {
  const std::string cmd = std::string(TOPODEM_CLI_PATH) + " " + args + " >> " +
                          (log_dir / "stdout.log").string() + " 2>> " +
                          (log_dir / "stderr.log").string();
  return std::system(cmd.c_str());
}

bool run_pipeline(const fs::path& root) {
  fs::create_directories(root / "diagrams");
  for (int r = 0; r < 25; ++r) {
    const std::string name = "region" + std::to_string(100 + r);
    write_file((root / (name + ".geojson")).string(), region_geojson(r));
    if (run_cli("ingest --in " + (root / (name + ".geojson")).string() + " --out " +
                    (root / (name + ".graph.json")).string(),
                root) != 0)
      return false;
    if (run_cli("diagram --in " + (root / (name + ".graph.json")).string() + " --out " +
                    (root / "diagrams" / (name + ".json")).string() + " --region " + name,
                root) != 0)
      return false;
  }
  const std::string dir = (root / "diagrams").string();
  if (run_cli("matrix --dir " + dir + " --out " + (root / "matrix.csv").string() + " --p 1",
              root) != 0)
    return false;
  if (run_cli("mds --in " + (root / "matrix.csv").string() + " --out " +
                  (root / "coords.csv").string(),
              root) != 0)
    return false;
  if (run_cli("outliers --in " + (root / "matrix.csv").string() + " --out " +
                  (root / "outliers.csv").string(),
              root) != 0)
    return false;
  if (run_cli("cluster --dir " + dir + " --out " + (root / "clusters.json").string() +
                  " --k 3 --seed 7",
              root) != 0)
    return false;
  if (run_cli("elbow --dir " + dir + " --out " + (root / "elbow.csv").string() +
                  " --k-max 3 --seed 7",
              root) != 0)
    return false;
  return true;
}

void criterion_determinism() {
  const fs::path base =
      fs::temp_directory_path() / ("topodem_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  fs::create_directories(base);
  bool pass = run_pipeline(base / "run_a") && run_pipeline(base / "run_b");
  int compared = 0;
  if (pass) {
    for (const auto& entry : fs::recursive_directory_iterator(base / "run_a")) {
      if (!entry.is_regular_file()) continue;
      const fs::path rel = fs::relative(entry.path(), base / "run_a");
      if (rel.filename() == "stdout.log" || rel.filename() == "stderr.log") continue;
      ++compared;
      if (read_file(entry.path().string()) != read_file((base / "run_b" / rel).string())) {
        pass = false;
        break;
      }
    }
    pass = pass && compared > 50;
  }
  fs::remove_all(base);
  std::ostringstream note;
  note << compared << " files byte-compared";
  report(10, "two full pipeline runs are byte-identical", pass, note.str());
}

// ---- 11. performance envelope ----------------------------------------------

void criterion_performance() {
  std::mt19937_64 rng(1009);
  auto unit = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  // 10,000-vertex, 30,000-edge graph.
  DualGraph graph;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    GraphVertex v;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "v%05d", i);
    v.id = buf;
    v.filtration = unit();
    v.share = 1.0 - v.filtration;
    v.population = 100;
    graph.vertices.push_back(std::move(v));
  }
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.insert({i, i + 1});
  while (edges.size() < 30000) {
    int a = static_cast<int>(unit() * n);
    int b = static_cast<int>(unit() * n);
    if (a == b) continue;
    edges.insert({std::min(a, b), std::max(a, b)});
  }
  graph.edges.assign(edges.begin(), edges.end());
  graph.component_count = count_components(n, graph.edges);

  auto start = Clock::now();
  const auto big_diagram = sublevel_diagram(graph);
  const double diagram_time = seconds_since(start);

  // W1 between two 200-point diagrams.
  auto make_big = [&](int points) {
    PersistenceDiagram d;
    d.cap = 1.0;
    for (int i = 0; i < points; ++i) {
      const double birth = unit() * 0.9;
      d.points.push_back({birth, birth + (0.01 + 0.99 * unit()) * (1.0 - birth), "", false});
    }
    canonicalize(d);
    return d;
  };
  const auto big_p = make_big(200);
  const auto big_q = make_big(200);
  start = Clock::now();
  const double w = wasserstein(big_p, big_q, 1.0);
  const double pair_time = seconds_since(start);

  // 50 x 50 matrix over 100-point diagrams at p = 1.
  std::vector<PersistenceDiagram> corpus;
  for (int i = 0; i < 50; ++i) {
    auto d = make_big(100);
    d.region_id = "r" + std::to_string(100 + i);
    corpus.push_back(std::move(d));
  }
  start = Clock::now();
  const DistanceMatrix matrix = distance_matrix(corpus, 1.0);
  const double matrix_time = seconds_since(start);

  const bool pass = diagram_time < 1.0 && pair_time < 5.0 && matrix_time < 60.0 &&
                    !big_diagram.points.empty() && w >= 0.0 && matrix.values(0, 1) >= 0.0;
  std::ostringstream note;
  note << "diagram " << diagram_time << " s, 200-point W1 " << pair_time << " s, 50x50 matrix "
       << matrix_time << " s";
  report(11, "performance envelope", pass, note.str());
}

} // namespace

int main() {
  criterion_persistence_oracle();
  criterion_wasserstein_oracle();
  criterion_metric_axioms();
  criterion_integral_identity();
  criterion_share_values();
  criterion_essential_count();
  criterion_mds_round_trip();
  criterion_outlier_detection();
  criterion_clustering();
  criterion_determinism();
  criterion_performance();
  if (g_failures == 0)
    std::printf("all acceptance criteria passed\n");
  else
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  return g_failures;
}
