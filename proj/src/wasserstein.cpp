#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzydr/error.hpp"
#include "fuzzydr/eval.hpp"

namespace fuzzydr {

std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Potentials and matching are 1-based; column 0 is a virtual start.
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0);
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = static_cast<int>(j - 1);
  }
  return assignment;
}

double wasserstein2(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (a.degree != b.degree) throw Error(ErrorCode::DegreeMismatch, "diagrams have different degrees");
  std::vector<PersistencePair> pa;
  std::vector<PersistencePair> pb;
  for (const auto& p : a.pairs) {
    if (!p.essential) pa.push_back(p);
  }
  for (const auto& p : b.pairs) {
    if (!p.essential) pb.push_back(p);
  }
  // Canonical argument order keeps the rounded result symmetric.
  auto key = [](const PersistencePair& p) { return std::pair(p.birth, p.death); };
  auto by_key = [&](const PersistencePair& x, const PersistencePair& y) { return key(x) < key(y); };
  std::sort(pa.begin(), pa.end(), by_key);
  std::sort(pb.begin(), pb.end(), by_key);
  if (std::lexicographical_compare(pb.begin(), pb.end(), pa.begin(), pa.end(), by_key)) pa.swap(pb);
  const std::size_t na = pa.size();
  const std::size_t nb = pb.size();
  const std::size_t n = na + nb;
  if (n == 0) return 0.0;
  auto to_diagonal = [](const PersistencePair& p) { return 0.5 * (p.death - p.birth) * (p.death - p.birth); };
  // Rows: points of a, then diagonal slots for b. Columns: points of b, then
  // diagonal slots for a.
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (r < na && c < nb) {
        const double db = pa[r].birth - pb[c].birth;
        const double dd = pa[r].death - pb[c].death;
        cost[r][c] = db * db + dd * dd;
      } else if (r < na) {
        cost[r][c] = to_diagonal(pa[r]);
      } else if (c < nb) {
        cost[r][c] = to_diagonal(pb[c]);
      }
    }
  }
  const auto assignment = hungarian(cost);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) total += cost[r][static_cast<std::size_t>(assignment[r])];
  return std::sqrt(std::max(total, 0.0));
}

}  // namespace fuzzydr
