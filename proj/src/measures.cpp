#include "fuzzydr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fuzzydr/error.hpp"

namespace fuzzydr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNormTol = 1e-9;

std::string describe(const SimplexKey& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ']';
  return os.str();
}

double xlogx_ratio(double a, double b) {
  if (a <= 0.0) return 0.0;
  if (b <= 0.0) return kInf;
  return a * std::log(a / b);
}

// Bernoulli KL divergence with 0 ln 0 = 0.
double bernoulli_kl(double a, double b) { return xlogx_ratio(a, b) + xlogx_ratio(1.0 - a, 1.0 - b); }

}  // namespace

ComplexMeasure::ComplexMeasure(int vertex_count, int maxdim, std::vector<Entry> support)
    : vertex_count_(vertex_count), maxdim_(maxdim), support_(std::move(support)) {
  if (support_.empty()) throw Error(ErrorCode::InvalidMeasure, "measure has empty support");
  double total = 0.0;
  std::set<CrispComplex> seen;
  for (const auto& e : support_) {
    if (e.complex.vertex_count() != vertex_count_ || e.complex.maxdim() != maxdim_) {
      throw Error(ErrorCode::ShapeMismatch, "support complex has a different shape");
    }
    if (!(e.p >= 0.0) || !std::isfinite(e.p)) {
      throw Error(ErrorCode::InvalidMeasure, "probability " + std::to_string(e.p) + " is not a nonnegative number");
    }
    if (!seen.insert(e.complex).second) throw Error(ErrorCode::InvalidMeasure, "duplicate complex in support");
    total += e.p;
  }
  if (std::abs(total - 1.0) > kNormTol) {
    throw Error(ErrorCode::InvalidMeasure, "probabilities sum to " + std::to_string(total));
  }
}

ComplexMeasure ComplexMeasure::delta(const CrispComplex& complex) {
  return ComplexMeasure(complex.vertex_count(), complex.maxdim(), {{complex, 1.0}});
}

double ComplexMeasure::probability(const CrispComplex& complex) const {
  for (const auto& e : support_) {
    if (e.complex == complex) return e.p;
  }
  return 0.0;
}

SimplexMeasure::SimplexMeasure(int vertex_count, int maxdim, std::map<SimplexKey, double> probs)
    : vertex_count_(vertex_count), maxdim_(maxdim), probs_(std::move(probs)) {
  double total = 0.0;
  for (const auto& [s, p] : probs_) {
    require_in_shape(s, vertex_count_, maxdim_);
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorCode::InvalidMeasure, "probability of " + describe(s) + " is not a nonnegative number");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTol) {
    throw Error(ErrorCode::InvalidMeasure, "simplex probabilities sum to " + std::to_string(total));
  }
}

double SimplexMeasure::probability(const SimplexKey& s) const {
  auto it = probs_.find(s);
  return it == probs_.end() ? 0.0 : it->second;
}

FuzzyComplex marginal(const ComplexMeasure& m) {
  std::map<SimplexKey, double> acc;
  for (const auto& e : m.support()) {
    for (const auto& s : e.complex.simplices()) acc[s] += e.p;
  }
  FuzzyComplex f(m.vertex_count(), m.maxdim());
  for (const auto& [s, w] : acc) f.set(s, std::clamp(w, 0.0, 1.0));
  return f;
}

ComplexMeasure level_set_preimage(const FuzzyComplex& f) {
  const auto report = check_monotone(f, 0.0);
  if (!report.ok()) {
    const auto& [face, coface] = report.violations.front();
    throw Error(ErrorCode::NonMonotoneInput,
                "weight of " + describe(coface) + " exceeds that of its face " + describe(face));
  }
  std::set<double, std::greater<>> levels;
  for (const auto& [s, w] : f.weights()) {
    if (w > 0.0) levels.insert(w);
  }
  std::vector<ComplexMeasure::Entry> support;
  const double top = levels.empty() ? 0.0 : *levels.begin();
  if (top < 1.0) support.push_back({CrispComplex(f.vertex_count(), f.maxdim()), 1.0 - top});
  for (auto it = levels.begin(); it != levels.end(); ++it) {
    const double level = *it;
    const double next = std::next(it) == levels.end() ? 0.0 : *std::next(it);
    std::set<SimplexKey> present;
    for (const auto& [s, w] : f.weights()) {
      if (w >= level) present.insert(s);
    }
    support.push_back({CrispComplex(f.vertex_count(), f.maxdim(), std::move(present)), level - next});
  }
  return ComplexMeasure(f.vertex_count(), f.maxdim(), std::move(support));
}

FuzzyComplex cdm_marginal(const SimplexMeasure& q) {
  const FacePoset fp = face_poset(q.vertex_count(), q.maxdim(), true);
  std::vector<double> mass(fp.simplices.size(), 0.0);
  for (const auto& [s, p] : q.probabilities()) mass[fp.index.at(s)] = p;
  const auto g = zeta_transform<double>(fp.poset, mass);
  FuzzyComplex f(q.vertex_count(), q.maxdim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] > 0.0) f.set(fp.simplices[i], std::clamp(g[i], 0.0, 1.0));
  }
  return f;
}

SimplexMeasure cdm_invert(const FuzzyComplex& f) {
  constexpr double kTol = 1e-12;
  const FacePoset fp = face_poset(f.vertex_count(), f.maxdim(), true);
  std::vector<double> g(fp.simplices.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = f.weight(fp.simplices[i]);
  const auto mu = moebius(fp.poset);
  const auto q = moebius_invert<double>(fp.poset, mu, g);
  std::map<SimplexKey, double> probs;
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] < -kTol) {
      throw Error(ErrorCode::NoPreimage,
                  "inverted mass of " + describe(fp.simplices[i]) + " is negative (" + std::to_string(q[i]) + ")");
    }
    total += q[i];
    if (q[i] > kTol) probs.emplace(fp.simplices[i], q[i]);
  }
  if (std::abs(total - 1.0) > kTol * static_cast<double>(q.size() + 1)) {
    throw Error(ErrorCode::NoPreimage, "inverted masses sum to " + std::to_string(total));
  }
  return SimplexMeasure(f.vertex_count(), f.maxdim(), std::move(probs));
}

ComplexMeasure boolean_merge(const ComplexMeasure& p1, const ComplexMeasure& p2, BoolOp op) {
  if (p1.vertex_count() != p2.vertex_count() || p1.maxdim() != p2.maxdim()) {
    throw Error(ErrorCode::ShapeMismatch, "boolean_merge: measures have different shapes");
  }
  std::map<CrispComplex, double> acc;
  for (const auto& a : p1.support()) {
    for (const auto& b : p2.support()) {
      std::set<SimplexKey> present;
      const auto& sa = a.complex.simplices();
      const auto& sb = b.complex.simplices();
      if (op == BoolOp::Or) {
        std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(present, present.end()));
      } else {
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(present, present.end()));
      }
      acc[CrispComplex(p1.vertex_count(), p1.maxdim(), std::move(present))] += a.p * b.p;
    }
  }
  std::vector<ComplexMeasure::Entry> support;
  support.reserve(acc.size());
  for (auto& [c, p] : acc) support.push_back({c, p});
  return ComplexMeasure(p1.vertex_count(), p1.maxdim(), std::move(support));
}

double kl_divergence(const ComplexMeasure& p, const ComplexMeasure& q) {
  if (p.vertex_count() != q.vertex_count() || p.maxdim() != q.maxdim()) {
    throw Error(ErrorCode::ShapeMismatch, "kl_divergence: measures have different shapes");
  }
  std::map<CrispComplex, double> qmap;
  for (const auto& e : q.support()) qmap.emplace(e.complex, e.p);
  double total = 0.0;
  for (const auto& e : p.support()) {
    if (e.p <= 0.0) continue;
    auto it = qmap.find(e.complex);
    if (it == qmap.end() || it->second <= 0.0) return kInf;
    total += e.p * std::log(e.p / it->second);
  }
  return total;
}

double cross_entropy_term(double mu, double nu, double eps) {
  if (mu > 0.0 && mu < 1.0) {
    const double c = std::clamp(nu, eps, 1.0 - eps);
    return mu * std::log(mu / c) + (1.0 - mu) * std::log((1.0 - mu) / (1.0 - c));
  }
  if (mu >= 1.0) return nu <= 0.0 ? kInf : -std::log(nu);
  return nu >= 1.0 ? kInf : -std::log1p(-nu);
}

double fuzzy_cross_entropy(const FuzzyComplex& a, const FuzzyComplex& b, const std::vector<double>& dim_weights) {
  if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, "fuzzy_cross_entropy: different shapes");
  if (!dim_weights.empty() && dim_weights.size() < static_cast<std::size_t>(a.maxdim() + 1)) {
    throw Error(ErrorCode::ShapeMismatch, "fuzzy_cross_entropy: need one weight per dimension");
  }
  std::set<SimplexKey> keys;
  for (const auto& [s, w] : a.weights()) keys.insert(s);
  for (const auto& [s, w] : b.weights()) keys.insert(s);
  double total = 0.0;
  for (const auto& s : keys) {
    const double w = dim_weights.empty() ? 1.0 : dim_weights[static_cast<std::size_t>(s.dim())];
    if (w == 0.0) continue;
    total += w * cross_entropy_term(a.weight(s), b.weight(s));
  }
  return total;
}

ComplexMeasure independent_edge_measure(const EdgeIndependentMeasure& e) {
  const int n = e.vertex_count;
  std::set<SimplexKey> certain;
  for (int v = 0; v < n; ++v) certain.insert(SimplexKey{v});
  std::vector<std::pair<SimplexKey, double>> coins;
  std::size_t edge_count = 0;
  for (const auto& [edge, p] : e.edge_prob) {
    if (edge.size() != 2) throw Error(ErrorCode::InvalidSimplex, describe(edge) + " is not an edge");
    require_in_shape(edge, n, 1);
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidMeasure, "edge probability outside [0,1]");
    ++edge_count;
    if (p == 1.0) {
      certain.insert(edge);
    } else if (p > 0.0) {
      coins.emplace_back(edge, p);
    }
  }
  if (edge_count > kMaxEnumeratedEdges) {
    throw Error(ErrorCode::CapExceeded, std::to_string(edge_count) + " edges exceed the enumeration cap of " +
                                            std::to_string(kMaxEnumeratedEdges));
  }
  std::vector<ComplexMeasure::Entry> support;
  const std::uint32_t patterns = 1u << coins.size();
  support.reserve(patterns);
  for (std::uint32_t mask = 0; mask < patterns; ++mask) {
    std::set<SimplexKey> present = certain;
    double p = 1.0;
    for (std::size_t i = 0; i < coins.size(); ++i) {
      if (mask & (1u << i)) {
        present.insert(coins[i].first);
        p *= coins[i].second;
      } else {
        p *= 1.0 - coins[i].second;
      }
    }
    support.push_back({CrispComplex(n, 1, std::move(present)), p});
  }
  return ComplexMeasure(n, 1, std::move(support));
}

CeKlReport ce_kl_gap(const ComplexMeasure& p, const ComplexMeasure& q) {
  CeKlReport r;
  r.cross_entropy = fuzzy_cross_entropy(marginal(p), marginal(q));
  r.kl = kl_divergence(p, q);
  r.gap = std::abs(r.cross_entropy - r.kl);
  if (std::isinf(r.cross_entropy) && std::isinf(r.kl)) r.gap = 0.0;
  return r;
}

CeKlReport verify_ce_equals_kl(const EdgeIndependentMeasure& e1, const EdgeIndependentMeasure& e2) {
  if (e1.vertex_count != e2.vertex_count) throw Error(ErrorCode::ShapeMismatch, "different vertex counts");
  return ce_kl_gap(independent_edge_measure(e1), independent_edge_measure(e2));
}

ComplexMeasure locally_markov_measure(int vertex_count, int maxdim, const std::map<SimplexKey, double>& conditional) {
  const auto order = all_simplices(vertex_count, maxdim);
  if (order.size() > 24) throw Error(ErrorCode::CapExceeded, "too many simplices to enumerate");
  for (const auto& [s, c] : conditional) {
    require_in_shape(s, vertex_count, maxdim);
    if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::InvalidMeasure, "conditional outside [0,1]");
  }
  std::map<CrispComplex, double> acc;
  std::set<SimplexKey> present;
  std::function<void(std::size_t, double)> visit = [&](std::size_t i, double p) {
    if (p <= 0.0) return;
    if (i == order.size()) {
      acc[CrispComplex(vertex_count, maxdim, present)] += p;
      return;
    }
    const SimplexKey& s = order[i];
    bool parents = true;
    if (s.size() > 1) {
      for (const auto& f : faces(s)) parents = parents && present.contains(f);
    }
    auto it = conditional.find(s);
    const double c = parents && it != conditional.end() ? it->second : 0.0;
    visit(i + 1, p * (1.0 - c));
    if (c > 0.0) {
      present.insert(s);
      visit(i + 1, p * c);
      present.erase(s);
    }
  };
  visit(0, 1.0);
  std::vector<ComplexMeasure::Entry> support;
  for (auto& [c, p] : acc) support.push_back({c, p});
  return ComplexMeasure(vertex_count, maxdim, std::move(support));
}

namespace {

struct MaskedSupport {
  std::vector<SimplexKey> order;
  std::vector<std::uint64_t> parent_mask;
  std::vector<std::pair<std::uint64_t, double>> rows;
};

MaskedSupport mask_support(const ComplexMeasure& p) {
  MaskedSupport m;
  m.order = all_simplices(p.vertex_count(), p.maxdim());
  if (m.order.size() > 63) {
    throw Error(ErrorCode::CapExceeded, std::to_string(m.order.size()) + " simplices exceed the cap of 63");
  }
  std::map<SimplexKey, std::size_t> index;
  for (std::size_t i = 0; i < m.order.size(); ++i) index.emplace(m.order[i], i);
  m.parent_mask.assign(m.order.size(), 0);
  for (std::size_t i = 0; i < m.order.size(); ++i) {
    if (m.order[i].size() < 2) continue;
    for (const auto& f : faces(m.order[i])) m.parent_mask[i] |= std::uint64_t{1} << index.at(f);
  }
  for (const auto& e : p.support()) {
    std::uint64_t bits = 0;
    for (const auto& s : e.complex.simplices()) bits |= std::uint64_t{1} << index.at(s);
    m.rows.emplace_back(bits, e.p);
  }
  return m;
}

}  // namespace

std::string locally_markov_violation(const ComplexMeasure& p, double tolerance) {
  const MaskedSupport m = mask_support(p);
  for (std::size_t t = 0; t < m.order.size(); ++t) {
    const std::uint64_t self = std::uint64_t{1} << t;
    const std::uint64_t prefix = self - 1;
    // Mass of each prefix (and parent) pattern, and of that pattern with t present.
    std::unordered_map<std::uint64_t, std::pair<double, double>> by_prefix;
    std::unordered_map<std::uint64_t, std::pair<double, double>> by_parent;
    for (const auto& [bits, pr] : m.rows) {
      auto& a = by_prefix[bits & prefix];
      auto& b = by_parent[bits & m.parent_mask[t]];
      a.first += pr;
      b.first += pr;
      if (bits & self) {
        a.second += pr;
        b.second += pr;
      }
    }
    for (const auto& [pattern, mass] : by_prefix) {
      if (mass.first <= 0.0) continue;
      const auto& par = by_parent.at(pattern & m.parent_mask[t]);
      const double given_prefix = mass.second / mass.first;
      const double given_parents = par.second / par.first;
      if (std::abs(given_prefix - given_parents) > tolerance) {
        std::ostringstream os;
        os << describe(m.order[t]) << " is not independent of earlier simplices given its faces: p = "
           << given_prefix << " given the full prefix but " << given_parents << " given its faces";
        return os.str();
      }
    }
  }
  return {};
}

double locally_markov_kl(const ComplexMeasure& p, const ComplexMeasure& q) {
  if (p.vertex_count() != q.vertex_count() || p.maxdim() != q.maxdim()) {
    throw Error(ErrorCode::ShapeMismatch, "locally_markov_kl: measures have different shapes");
  }
  for (const ComplexMeasure* m : {&p, &q}) {
    const std::string why = locally_markov_violation(*m);
    if (!why.empty()) throw Error(ErrorCode::NotLocallyMarkov, why);
  }
  const MaskedSupport mp = mask_support(p);
  const MaskedSupport mq = mask_support(q);
  double total = 0.0;
  for (std::size_t t = 0; t < mp.order.size(); ++t) {
    const std::uint64_t self = std::uint64_t{1} << t;
    const std::uint64_t parents = mp.parent_mask[t];
    auto conditional = [&](const MaskedSupport& m, double& parent_mass) {
      double present = 0.0;
      parent_mass = 0.0;
      for (const auto& [bits, pr] : m.rows) {
        if ((bits & parents) != parents) continue;
        parent_mass += pr;
        if (bits & self) present += pr;
      }
      return parent_mass > 0.0 ? present / parent_mass : 0.0;
    };
    double pp = 0.0;
    double pq = 0.0;
    const double cp = conditional(mp, pp);
    const double cq = conditional(mq, pq);
    if (pp <= 0.0) continue;
    total += pp * bernoulli_kl(cp, cq);
  }
  return total;
}

RankOrderChain RankOrderChain::build(std::vector<std::pair<SimplexKey, double>> edges, const ScaleDistribution& dist) {
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  RankOrderChain chain;
  chain.links.reserve(edges.size());
  for (auto& [e, d] : edges) chain.links.push_back({std::move(e), d, dist.cdf(d)});
  return chain;
}

double rank_order_joint(const RankOrderChain& chain, const std::vector<bool>& present) {
  const std::size_t n = chain.links.size();
  if (present.size() != n) throw Error(ErrorCode::ShapeMismatch, "assignment length differs from chain length");
  std::size_t a = 0;
  while (a < n && present[a]) ++a;
  for (std::size_t k = a; k < n; ++k) {
    if (present[k]) return 0.0;
  }
  // Edges 0..a-1 present and a..n-1 absent: the scale falls in [d_{a-1}, d_a).
  const double upper = a < n ? chain.links[a].phi : 1.0;
  const double lower = a > 0 ? chain.links[a - 1].phi : 0.0;
  return std::max(0.0, upper - lower);
}

double rank_order_chain_factorization(const RankOrderChain& chain, const std::vector<bool>& present) {
  const std::size_t n = chain.links.size();
  if (present.size() != n) throw Error(ErrorCode::ShapeMismatch, "assignment length differs from chain length");
  if (n == 0) return 1.0;
  auto marginal_present = [&](std::size_t k) { return 1.0 - chain.links[k].phi; };
  auto pair_joint = [&](std::size_t k, bool prev, bool cur) {
    const double phi_k = chain.links[k].phi;
    const double phi_prev = chain.links[k - 1].phi;
    if (prev && cur) return 1.0 - phi_k;
    if (prev && !cur) return phi_k - phi_prev;
    if (!prev && cur) return 0.0;
    return phi_prev;
  };
  double p = present[0] ? marginal_present(0) : 1.0 - marginal_present(0);
  for (std::size_t k = 1; k < n && p > 0.0; ++k) {
    const double prev_mass = present[k - 1] ? marginal_present(k - 1) : 1.0 - marginal_present(k - 1);
    if (prev_mass <= 0.0) return 0.0;
    p *= pair_joint(k, present[k - 1], present[k]) / prev_mass;
  }
  return std::max(0.0, p);
}

}  // namespace fuzzydr
