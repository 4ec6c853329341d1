#pragma once

#include <cstdint>
#include <vector>

#include "topodem/persistence.hpp"

namespace topodem {

/// Result of k-means over diagrams. `distortion_trace` holds the objective
/// after every assignment phase, starting with the initial assignment.
struct ClusterResult {
  std::vector<int> labels;
  std::vector<PersistenceDiagram> means;
  double distortion = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<double> distortion_trace;
};

/// Locally optimal average diagram under W_2: alternately computes optimal
/// matchings of the current mean against every diagram, then moves each mean
/// point to the closed-form minimizer for its matched partners (diagonal
/// matches pull toward the partners' diagonal projection). Points whose
/// update lands on the diagonal are deleted. Stops when the matchings repeat
/// or after 100 rounds.
PersistenceDiagram frechet_mean(const std::vector<PersistenceDiagram>& diagrams,
                                const PersistenceDiagram& initial);

/// k-means++ seeding: first center uniform, each further center sampled with
/// probability proportional to squared W_2 distance to the nearest chosen
/// center. Sampling uses std::mt19937_64 with 53-bit uniforms, so results
/// are identical across platforms for a fixed seed.
std::vector<PersistenceDiagram> kmeanspp_init(const std::vector<PersistenceDiagram>& diagrams,
                                              int k, std::uint64_t seed);

/// Lloyd iteration in diagram space: assign to the nearest mean under W_2
/// (ties to the lowest cluster index), recompute each mean with frechet_mean
/// initialized at its previous value, stop when labels repeat or after
/// max_iter rounds. Empty clusters keep their previous mean.
ClusterResult kmeans_diagrams(const std::vector<PersistenceDiagram>& diagrams, int k,
                              std::uint64_t seed, int max_iter = 50);

/// Final distortion per k; each k runs with seed + k.
std::vector<std::pair<int, double>> elbow_curve(const std::vector<PersistenceDiagram>& diagrams,
                                                const std::vector<int>& k_values,
                                                std::uint64_t seed);

} // namespace topodem
