#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "fuzzydr/embed.hpp"
#include "fuzzydr/error.hpp"
#include "fuzzydr/filtrations.hpp"
#include "fuzzydr/simplicial.hpp"

namespace fuzzydr {

namespace {

int uniform_index(Rng& rng, std::size_t n) {
  return static_cast<int>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
}

std::vector<int> union_without(const NeighborGraph& g, int i, int j) {
  std::vector<int> out;
  for (int a : {i, j}) {
    for (const auto& nb : g.neighbors[static_cast<std::size_t>(a)]) {
      if (nb.id != i && nb.id != j) out.push_back(nb.id);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Triplet uniform_triplet(Rng& rng, std::size_t n) {
  const int i = uniform_index(rng, n);
  int j = uniform_index(rng, n);
  while (j == i) j = uniform_index(rng, n);
  int k = uniform_index(rng, n);
  while (k == i || k == j) k = uniform_index(rng, n);
  return {i, j, k};
}

bool has_outside_point(const NeighborGraph& g) {
  const std::size_t n = g.size();
  if (2 * static_cast<std::size_t>(g.k) + 2 < n) return true;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : g.neighbors[i]) {
      if (union_without(g, static_cast<int>(i), nb.id).size() + 2 < n) return true;
    }
  }
  return false;
}

// k outside N(i) u N(j) u {i, j}, or -1 when there is none.
int outside_point(Rng& rng, const NeighborGraph& g, int i, int j) {
  const std::size_t n = g.size();
  auto inside = [&](int k) { return k == i || k == j || g.contains(i, k) || g.contains(j, k); };
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    const int k = uniform_index(rng, n);
    if (!inside(k)) return k;
  }
  std::vector<int> outside;
  for (std::size_t k = 0; k < n; ++k) {
    if (!inside(static_cast<int>(k))) outside.push_back(static_cast<int>(k));
  }
  return outside.empty() ? -1 : outside[static_cast<std::size_t>(uniform_index(rng, outside.size()))];
}

}  // namespace

Triplet sample_positive_triplet(Rng& rng, const NeighborGraph& graph) {
  const std::size_t n = graph.size();
  for (int attempt = 0; attempt < kMaxSampleAttempts; ++attempt) {
    const int i = uniform_index(rng, n);
    const auto& row = graph.neighbors[static_cast<std::size_t>(i)];
    const int j = row[static_cast<std::size_t>(uniform_index(rng, row.size()))].id;
    const auto pool = union_without(graph, i, j);
    if (pool.empty()) continue;
    return {i, j, pool[static_cast<std::size_t>(uniform_index(rng, pool.size()))]};
  }
  throw Error(ErrorCode::DegenerateNeighborhood,
              "no positive triplet found in " + std::to_string(kMaxSampleAttempts) + " attempts");
}

std::vector<NegativeSample> sample_negative_triplets(Rng& rng, const NeighborGraph& graph, std::size_t count) {
  const std::size_t n = graph.size();
  if (n < 3) throw Error(ErrorCode::DegenerateNeighborhood, "triplets need at least three points");
  const bool semi_local_possible = has_outside_point(graph);
  std::bernoulli_distribution coin(0.5);
  std::vector<NegativeSample> out;
  out.reserve(count);
  while (out.size() < count) {
    if (!coin(rng) || !semi_local_possible) {
      out.push_back({uniform_triplet(rng, n), false});
      continue;
    }
    bool found = false;
    for (int attempt = 0; attempt < kMaxSampleAttempts && !found; ++attempt) {
      const int i = uniform_index(rng, n);
      const auto& row = graph.neighbors[static_cast<std::size_t>(i)];
      const int j = row[static_cast<std::size_t>(uniform_index(rng, row.size()))].id;
      const int k = outside_point(rng, graph, i, j);
      if (k >= 0) {
        out.push_back({{i, j, k}, true});
        found = true;
      }
    }
    if (!found) {
      throw Error(ErrorCode::DegenerateNeighborhood,
                  "no semi-local negative found in " + std::to_string(kMaxSampleAttempts) + " attempts");
    }
  }
  return out;
}

double triplet_weight(const Triplet& t, const TripletWeightSource& src, const ScaleDistribution& dist) {
  if (src.x == nullptr) throw Error(ErrorCode::BadParams, "triplet weight needs input points");
  if (!(src.global_scale > 0.0)) throw Error(ErrorCode::NonPositiveScale, "global scale must be positive");
  const Eigen::MatrixXd& x = *src.x;
  const double dij = (x.row(t.i) - x.row(t.j)).norm();
  const double djk = (x.row(t.j) - x.row(t.k)).norm();
  const double dki = (x.row(t.k) - x.row(t.i)).norm();
  double r = 0.0;
  if (src.mode == RadiusMode::Extrinsic) {
    r = cech3_radius(dij, djk, dki);
  } else {
    if (src.graph == nullptr) throw Error(ErrorCode::BadParams, "intrinsic radius needs the neighbour graph");
    std::vector<int> cand{t.i, t.j, t.k};
    for (int a : {t.i, t.j, t.k}) {
      for (const auto& nb : src.graph->neighbors[static_cast<std::size_t>(a)]) cand.push_back(nb.id);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<double> outer;
    outer.reserve(cand.size());
    const double tau = src.tau * src.global_scale;
    for (int c : cand) {
      const std::array<double, 3> inner{(x.row(t.i) - x.row(c)).norm(), (x.row(t.j) - x.row(c)).norm(),
                                        (x.row(t.k) - x.row(c)).norm()};
      outer.push_back(src.mode == RadiusMode::IntrinsicSoft ? soft_max(inner, tau)
                                                            : *std::max_element(inner.begin(), inner.end()));
    }
    r = src.mode == RadiusMode::IntrinsicSoft ? soft_min(outer, tau) : *std::min_element(outer.begin(), outer.end());
    r = std::max(r, 0.0);
  }
  return dist.survival(r / src.global_scale);
}

std::vector<EdgeSample> edge_weights(const Eigen::MatrixXd& x, const NeighborGraph& graph,
                                     const LocalScaling& scaling, const ScaleDistribution& dist_x) {
  std::map<std::pair<int, int>, std::pair<double, double>> directed;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const int a = static_cast<int>(i);
    for (const auto& nb : graph.neighbors[i]) {
      const double w = dist_x.survival(local_scaled_distance(a, nb.id, x, graph, scaling));
      if (a < nb.id) {
        directed[{a, nb.id}].first = w;
      } else {
        directed[{nb.id, a}].second = w;
      }
    }
  }
  std::vector<EdgeSample> out;
  out.reserve(directed.size());
  for (const auto& [e, w] : directed) {
    out.push_back({e.first, e.second, std::clamp(apply(FuzzyOp::ProbabilisticSum, w.first, w.second), 0.0, 1.0)});
  }
  return out;
}

}  // namespace fuzzydr
