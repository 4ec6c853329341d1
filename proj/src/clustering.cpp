#include "topodem/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "topodem/wasserstein.hpp"

namespace topodem {

namespace {

// All sampling goes through mt19937_64 with 53-bit uniforms so that results
// are reproducible across standard library implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}

  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  int uniform_index(int n) {
    return std::min(static_cast<int>(next_unit() * n), n - 1);
  }

 private:
  std::mt19937_64 gen_;
};

// Partner index in each diagram for each mean point; -1 is the diagonal.
using MatchTable = std::vector<std::vector<int>>;

MatchTable compute_matchings(const PersistenceDiagram& mean,
                             const std::vector<PersistenceDiagram>& diagrams) {
  MatchTable table(diagrams.size());
  for (std::size_t i = 0; i < diagrams.size(); ++i) {
    Matching match;
    wasserstein(mean, diagrams[i], 2.0, match);
    auto& partners = table[i];
    partners.assign(mean.points.size(), -1);
    for (const auto& [mj, pj] : match.pairs) partners[mj] = pj;
  }
  return table;
}

double squared_w2(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  const double w = wasserstein(a, b, 2.0);
  return w * w;
}

} // namespace

PersistenceDiagram frechet_mean(const std::vector<PersistenceDiagram>& diagrams,
                                const PersistenceDiagram& initial) {
  if (diagrams.empty()) throw std::runtime_error("frechet_mean of an empty set");
  const double count = static_cast<double>(diagrams.size());

  PersistenceDiagram mean = initial;
  mean.region_id.clear();
  for (auto& p : mean.points) {
    p.birth_vertex.clear();
    p.essential = false;
  }

  MatchTable previous;
  for (int round = 0; round < 100; ++round) {
    MatchTable matchings = compute_matchings(mean, diagrams);
    if (round > 0 && matchings == previous) break;
    previous = matchings;

    std::vector<DiagramPoint> updated;
    updated.reserve(mean.points.size());
    for (std::size_t j = 0; j < mean.points.size(); ++j) {
      double sum_birth = 0.0, sum_death = 0.0;
      int matched = 0;
      bool all_equal = true;
      DiagramPoint first_partner;
      for (std::size_t i = 0; i < diagrams.size(); ++i) {
        const int pj = matchings[i][j];
        if (pj < 0) continue;
        const DiagramPoint& partner = diagrams[i].points[pj];
        if (matched == 0)
          first_partner = partner;
        else if (partner.birth != first_partner.birth || partner.death != first_partner.death)
          all_equal = false;
        sum_birth += partner.birth;
        sum_death += partner.death;
        ++matched;
      }
      if (matched == 0) continue; // matched to the diagonal everywhere: delete

      // Closed-form minimizer of sum ||y - x_i||^2 + (N - matched) * d(y, diag)^2:
      // stay on the partners' anti-diagonal, shrink the persistence by matched/N.
      double wb = sum_birth / matched;
      double wd = sum_death / matched;
      if (all_equal) {
        wb = first_partner.birth;
        wd = first_partner.death;
      }
      const double mid = (wb + wd) / 2.0;
      const double half_pers = (matched / count) * (wd - wb) / 2.0;
      if (half_pers <= 0.0) continue; // update landed on the diagonal
      if (matched == static_cast<int>(diagrams.size()))
        updated.push_back({wb, wd, "", false});
      else
        updated.push_back({mid - half_pers, mid + half_pers, "", false});
    }
    mean.points = std::move(updated);
  }

  canonicalize(mean);
  return mean;
}

std::vector<PersistenceDiagram> kmeanspp_init(const std::vector<PersistenceDiagram>& diagrams,
                                              int k, std::uint64_t seed) {
  const int n = static_cast<int>(diagrams.size());
  if (k < 1) throw std::runtime_error("k must be >= 1");
  if (k > n) throw std::runtime_error("k exceeds the number of diagrams");

  Sampler sampler(seed);
  std::vector<int> chosen;
  std::vector<char> is_chosen(n, 0);
  std::vector<double> nearest_sq(n, std::numeric_limits<double>::infinity());

  const int first = sampler.uniform_index(n);
  chosen.push_back(first);
  is_chosen[first] = 1;

  while (static_cast<int>(chosen.size()) < k) {
    const int latest = chosen.back();
    for (int i = 0; i < n; ++i)
      if (!is_chosen[i])
        nearest_sq[i] = std::min(nearest_sq[i], squared_w2(diagrams[i], diagrams[latest]));

    double total = 0.0;
    for (int i = 0; i < n; ++i)
      if (!is_chosen[i]) total += nearest_sq[i];

    int pick = -1;
    if (total > 0.0) {
      const double r = sampler.next_unit() * total;
      double cumulative = 0.0;
      for (int i = 0; i < n; ++i) {
        if (is_chosen[i]) continue;
        cumulative += nearest_sq[i];
        if (cumulative > r) {
          pick = i;
          break;
        }
      }
    }
    if (pick == -1) {
      // All remaining diagrams coincide with a chosen center.
      std::vector<int> remaining;
      for (int i = 0; i < n; ++i)
        if (!is_chosen[i]) remaining.push_back(i);
      pick = remaining[sampler.uniform_index(static_cast<int>(remaining.size()))];
    }
    chosen.push_back(pick);
    is_chosen[pick] = 1;
  }

  std::vector<PersistenceDiagram> centers;
  centers.reserve(chosen.size());
  for (int idx : chosen) centers.push_back(diagrams[idx]);
  return centers;
}

ClusterResult kmeans_diagrams(const std::vector<PersistenceDiagram>& diagrams, int k,
                              std::uint64_t seed, int max_iter) {
  const int n = static_cast<int>(diagrams.size());
  if (n == 0) throw std::runtime_error("no diagrams to cluster");

  ClusterResult result;
  result.seed = seed;
  result.means = kmeanspp_init(diagrams, k, seed);

  auto assign = [&](std::vector<int>& labels) {
    labels.assign(n, 0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_sq = squared_w2(diagrams[i], result.means[0]);
      for (int j = 1; j < k; ++j) {
        const double sq = squared_w2(diagrams[i], result.means[j]);
        if (sq < best_sq) { // ties keep the lowest cluster index
          best_sq = sq;
          best = j;
        }
      }
      labels[i] = best;
      total += best_sq;
    }
    result.distortion_trace.push_back(total);
  };

  assign(result.labels);
  for (int iter = 1; iter <= max_iter; ++iter) {
    for (int j = 0; j < k; ++j) {
      std::vector<PersistenceDiagram> members;
      for (int i = 0; i < n; ++i)
        if (result.labels[i] == j) members.push_back(diagrams[i]);
      if (!members.empty()) result.means[j] = frechet_mean(members, result.means[j]);
    }
    std::vector<int> new_labels;
    assign(new_labels);
    result.iterations = iter;
    const bool converged = new_labels == result.labels;
    result.labels = std::move(new_labels);
    if (converged) break;
  }

  result.distortion = result.distortion_trace.back();
  return result;
}

std::vector<std::pair<int, double>> elbow_curve(const std::vector<PersistenceDiagram>& diagrams,
                                                const std::vector<int>& k_values,
                                                std::uint64_t seed) {
  std::vector<std::pair<int, double>> curve;
  curve.reserve(k_values.size());
  for (int k : k_values) {
    const ClusterResult result = kmeans_diagrams(diagrams, k, seed + static_cast<std::uint64_t>(k));
    curve.emplace_back(k, result.distortion);
  }
  return curve;
}

} // namespace topodem
