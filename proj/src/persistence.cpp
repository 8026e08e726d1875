#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <unordered_map>

#include "fuzzydr/error.hpp"
#include "fuzzydr/eval.hpp"

namespace fuzzydr {

namespace {

struct Edge {
  double length;
  int i;
  int j;
};

// A triangle identified by its packed vertex triple, ordered by diameter.
struct TriangleKey {
  double diam;
  std::int64_t id;

  friend bool operator<(const TriangleKey& a, const TriangleKey& b) {
    return a.diam != b.diam ? a.diam < b.diam : a.id < b.id;
  }
  friend bool operator>(const TriangleKey& a, const TriangleKey& b) { return b < a; }
  friend bool operator==(const TriangleKey& a, const TriangleKey& b) { return a.id == b.id; }
};

using Column = std::vector<TriangleKey>;

// GF(2) column kept as a lazy min-heap; equal entries cancel when they meet
// at the top.
class WorkingColumn {
 public:
  explicit WorkingColumn(const Column& col) : heap_(std::greater<>{}, col) {}

  void add(const Column& col) {
    for (const auto& t : col) heap_.push(t);
  }

  std::optional<TriangleKey> pivot() {
    while (!heap_.empty()) {
      const TriangleKey top = heap_.top();
      heap_.pop();
      if (!heap_.empty() && heap_.top() == top) {
        heap_.pop();
        continue;
      }
      heap_.push(top);
      return top;
    }
    return std::nullopt;
  }

 private:
  std::priority_queue<TriangleKey, std::vector<TriangleKey>, std::greater<>> heap_;
};

std::vector<int> iota_roots(std::size_t n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

int find_root(std::vector<int>& parent, int a) {
  while (parent[static_cast<std::size_t>(a)] != a) {
    parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
    a = parent[static_cast<std::size_t>(a)];
  }
  return a;
}

void sort_pairs(PersistenceDiagram& dgm) {
  std::sort(dgm.pairs.begin(), dgm.pairs.end(), [](const PersistencePair& a, const PersistencePair& b) {
    return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
  });
}

}  // namespace

double enclosing_radius(const DistanceMatrix& d) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < d.size(); ++c) {
    double worst = 0.0;
    for (std::size_t j = 0; j < d.size(); ++j) worst = std::max(worst, d(c, j));
    best = std::min(best, worst);
  }
  return d.size() == 0 ? 0.0 : best;
}

std::vector<PersistenceDiagram> vr_persistence(const DistanceMatrix& d, int max_degree,
                                               std::optional<double> scale_cap) {
  const std::size_t n = d.size();
  if (n > kMaxPersistencePoints) {
    throw Error(ErrorCode::CapExceeded, std::to_string(n) + " points exceed the persistence cap of " +
                                            std::to_string(kMaxPersistencePoints));
  }
  if (max_degree < 0 || max_degree > 1) throw Error(ErrorCode::BadParams, "only degrees 0 and 1 are supported");
  const double cap = scale_cap.value_or(enclosing_radius(d));
  if (!(cap >= 0.0)) throw Error(ErrorCode::NegativeScale, "negative scale cap");

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d(i, j) <= cap) edges.push_back({d(i, j), static_cast<int>(i), static_cast<int>(j)});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });

  std::vector<PersistenceDiagram> out(static_cast<std::size_t>(max_degree + 1));
  out[0].degree = 0;
  // Degree 0: union-find over sorted edges; the root is the smallest index, so
  // the component containing the lower index survives a merge.
  std::vector<int> parent = iota_roots(n);
  std::vector<char> tree_edge(edges.size(), 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const int a = find_root(parent, edges[e].i);
    const int b = find_root(parent, edges[e].j);
    if (a == b) continue;
    out[0].pairs.push_back({0.0, edges[e].length, false});
    parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    tree_edge[e] = 1;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (find_root(parent, static_cast<int>(v)) == static_cast<int>(v)) out[0].pairs.push_back({0.0, cap, true});
  }
  sort_pairs(out[0]);
  if (max_degree == 0) return out;

  // Degree 1: reduce edge coboundaries in reverse filtration order. Tree edges
  // are paired with vertices in degree 0 and reduce to zero, so they are
  // skipped. Each reduced column is stored as the set of edges it sums.
  out[1].degree = 1;
  const auto nn = static_cast<std::int64_t>(n);
  auto coboundary = [&](std::size_t e, Column& col) {
    const Edge& ed = edges[e];
    col.clear();
    for (std::size_t k = 0; k < n; ++k) {
      const int kk = static_cast<int>(k);
      if (kk == ed.i || kk == ed.j) continue;
      const double diam = std::max({ed.length, d(static_cast<std::size_t>(ed.i), k),
                                    d(static_cast<std::size_t>(ed.j), k)});
      if (diam > cap) continue;
      int v[3] = {ed.i, ed.j, kk};
      std::sort(v, v + 3);
      col.push_back({diam, (v[0] * nn + v[1]) * nn + v[2]});
    }
    std::sort(col.begin(), col.end());
  };
  // Position of an edge in the filtration order, for the youngest-facet test.
  auto edge_before = [&](double la, int ia, int ja, double lb, int ib, int jb) {
    if (la != lb) return la < lb;
    return ia != ib ? ia < ib : ja < jb;
  };
  std::unordered_map<std::int64_t, std::size_t> pivot_owner;
  std::vector<std::vector<std::size_t>> combination(edges.size());
  Column col;
  Column other;
  std::vector<std::size_t> sum;
  std::vector<std::size_t> sum_scratch;
  for (std::size_t e = edges.size(); e-- > 0;) {
    if (tree_edge[e]) continue;
    const Edge& ed = edges[e];
    // Apparent pair: the oldest cofacet has this edge as its youngest facet.
    TriangleKey oldest{std::numeric_limits<double>::infinity(), 0};
    int oldest_k = -1;
    for (std::size_t k = 0; k < n; ++k) {
      const int kk = static_cast<int>(k);
      if (kk == ed.i || kk == ed.j) continue;
      const double dik = d(static_cast<std::size_t>(ed.i), k);
      const double djk = d(static_cast<std::size_t>(ed.j), k);
      const double diam = std::max({ed.length, dik, djk});
      if (diam > cap) continue;
      int v[3] = {ed.i, ed.j, kk};
      std::sort(v, v + 3);
      const TriangleKey t{diam, (v[0] * nn + v[1]) * nn + v[2]};
      if (t < oldest) {
        oldest = t;
        oldest_k = kk;
      }
    }
    if (oldest_k >= 0 && oldest.diam == ed.length) {
      const double dik = d(static_cast<std::size_t>(ed.i), static_cast<std::size_t>(oldest_k));
      const double djk = d(static_cast<std::size_t>(ed.j), static_cast<std::size_t>(oldest_k));
      const int a1 = std::min(ed.i, oldest_k), b1 = std::max(ed.i, oldest_k);
      const int a2 = std::min(ed.j, oldest_k), b2 = std::max(ed.j, oldest_k);
      if (edge_before(dik, a1, b1, ed.length, ed.i, ed.j) && edge_before(djk, a2, b2, ed.length, ed.i, ed.j)) {
        pivot_owner.emplace(oldest.id, e);
        combination[e] = {e};
        continue;
      }
    }
    coboundary(e, col);
    WorkingColumn work(col);
    sum.assign(1, e);
    std::optional<TriangleKey> pivot = work.pivot();
    while (pivot) {
      auto it = pivot_owner.find(pivot->id);
      if (it == pivot_owner.end()) break;
      for (std::size_t f : combination[it->second]) {
        coboundary(f, other);
        work.add(other);
      }
      sum_scratch.clear();
      const auto& c = combination[it->second];
      std::set_symmetric_difference(sum.begin(), sum.end(), c.begin(), c.end(), std::back_inserter(sum_scratch));
      sum.swap(sum_scratch);
      pivot = work.pivot();
    }
    if (!pivot) {
      out[1].pairs.push_back({ed.length, cap, true});
      continue;
    }
    const double death = pivot->diam;
    pivot_owner.emplace(pivot->id, e);
    combination[e] = sum;
    if (death > ed.length) out[1].pairs.push_back({ed.length, death, false});
  }
  sort_pairs(out[1]);
  return out;
}

}  // namespace fuzzydr
