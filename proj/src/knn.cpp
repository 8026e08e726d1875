#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fuzzydr/embed.hpp"
#include "fuzzydr/error.hpp"

namespace fuzzydr {

bool NeighborGraph::contains(int i, int j) const {
  const auto& row = neighbors[static_cast<std::size_t>(i)];
  return std::any_of(row.begin(), row.end(), [j](const Neighbor& nb) { return nb.id == j; });
}

NeighborGraph exact_knn(const Eigen::MatrixXd& x, int k) {
  const Eigen::Index n = x.rows();
  if (k <= 0 || k >= n) {
    throw Error(ErrorCode::KTooLarge, "k = " + std::to_string(k) + " needs 0 < k < n = " + std::to_string(n));
  }
  NeighborGraph g;
  g.k = k;
  g.neighbors.resize(static_cast<std::size_t>(n));
  std::vector<Neighbor> row;
  for (Eigen::Index i = 0; i < n; ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) row.push_back({static_cast<int>(j), (x.row(i) - x.row(j)).norm()});
    }
    const auto by_distance = [](const Neighbor& a, const Neighbor& b) {
      return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
    };
    std::partial_sort(row.begin(), row.begin() + k, row.end(), by_distance);
    g.neighbors[static_cast<std::size_t>(i)].assign(row.begin(), row.begin() + k);
  }
  return g;
}

LocalScaling local_scaling(const NeighborGraph& graph) {
  LocalScaling s;
  const std::size_t n = graph.size();
  s.rho.resize(n);
  s.sigma.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = graph.neighbors[i];
    s.rho[i] = row.front().distance;
    double mean = 0.0;
    for (const auto& nb : row) mean += nb.distance;
    mean /= static_cast<double>(row.size());
    s.sigma[i] = std::max(mean - s.rho[i], kSigmaFloor);
    s.global_scale = std::max(s.global_scale, row.back().distance);
  }
  if (!(s.global_scale > 0.0)) {
    throw Error(ErrorCode::NonPositiveScale, "all k-nearest-neighbour distances are zero");
  }
  return s;
}

double local_scaled_distance(int i, int j, const Eigen::MatrixXd& x, const NeighborGraph& graph,
                             const LocalScaling& scaling) {
  if (i == j) return 0.0;
  if (!graph.contains(i, j)) return std::numeric_limits<double>::infinity();
  const auto ui = static_cast<std::size_t>(i);
  const double d = (x.row(i) - x.row(j)).norm();
  return std::max(0.0, (d - scaling.rho[ui]) / scaling.sigma[ui]);
}

double rescaled_edge_radius(double a, double b, double d) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::NonPositiveScale, "rescaling factors must be positive");
  if (std::isinf(a)) return b * d;
  if (std::isinf(b)) return a * d;
  return a * b / (a + b) * d;
}

}  // namespace fuzzydr
