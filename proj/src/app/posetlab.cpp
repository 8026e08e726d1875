#include "fuzzydr/posetlab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "fuzzydr/error.hpp"

namespace fuzzydr {

namespace {

std::string describe(const SimplexKey& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ']';
  return os.str();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Tracks the worst deviation and the first counterexample.
struct Tally {
  LawResult result;
  double tolerance;

  Tally(std::string law, double tol) : tolerance(tol) {
    result.law = std::move(law);
    result.passed = true;
  }

  void check(double got, double want, const std::string& where) {
    const double err = std::isinf(got) && std::isinf(want) && (got > 0) == (want > 0) ? 0.0 : std::abs(got - want);
    const bool ok = err <= tolerance;
    if (!(err <= result.max_error)) result.max_error = std::isnan(err) ? result.max_error : err;
    if (!ok) fail(where + ": got " + num(got) + ", expected " + num(want));
  }

  void fail(const std::string& why) {
    if (result.passed) result.detail = why;
    result.passed = false;
  }

  LawResult done() { return std::move(result); }
};

std::vector<double> uniform_vector(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

FinitePoset random_poset(Rng& rng, std::size_t n) {
  std::bernoulli_distribution edge(0.35);
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    leq[i][i] = true;
    for (std::size_t j = i + 1; j < n; ++j) leq[i][j] = edge(rng);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
      }
    }
  }
  // Relabel so the order is not aligned with the indices.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<bool>> out(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[perm[i]][perm[j]] = leq[i][j];
  }
  return FinitePoset::validate(out);
}

}  // namespace

const std::vector<std::string>& law_names() {
  static const std::vector<std::string> names{
      "marginal-roundtrip", "moebius-roundtrip", "cdm-nonsurjective", "merge", "order-of-operations", "ce-kl",
      "ce-kl-dependent",    "filtration-marginal", "rank-order",      "figure4"};
  return names;
}

LawResult run_law(const std::string& name, std::uint64_t seed) {
  if (name == "marginal-roundtrip") return law_marginal_roundtrip(seed);
  if (name == "moebius-roundtrip") return law_moebius_roundtrip(seed);
  if (name == "cdm-nonsurjective") return law_cdm_nonsurjective();
  if (name == "merge") return law_merge(seed);
  if (name == "order-of-operations") return law_order_of_operations();
  if (name == "ce-kl") return law_ce_kl(seed);
  if (name == "ce-kl-dependent") return law_ce_kl_dependent();
  if (name == "filtration-marginal") return law_filtration_marginal(seed);
  if (name == "rank-order") return law_rank_order(seed);
  if (name == "figure4") return law_figure4();
  throw Error(ErrorCode::BadParams, "unknown law '" + name + "'");
}

std::vector<LawResult> run_all_laws(std::uint64_t seed) {
  std::vector<LawResult> out;
  for (const auto& name : law_names()) out.push_back(run_law(name, seed));
  return out;
}

FuzzyComplex random_monotone_complex(Rng& rng, int vertex_count, int maxdim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution zero(0.15);
  std::bernoulli_distribution copy(0.2);
  FuzzyComplex f(vertex_count, maxdim);
  for (const auto& s : all_simplices(vertex_count, maxdim)) {
    if (s.dim() == 0) {
      f.set(s, copy(rng) ? 1.0 : u(rng));
      continue;
    }
    double lo = 1.0;
    for (const auto& face : faces(s)) lo = std::min(lo, f.weight(face));
    double w = 0.0;
    if (!zero(rng)) w = copy(rng) ? lo : lo * u(rng);
    f.set(s, w);
  }
  return f;
}

SimplexMeasure random_simplex_measure(Rng& rng, int vertex_count, int maxdim) {
  const auto simplices = all_simplices(vertex_count, maxdim);
  std::bernoulli_distribution keep(0.5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::map<SimplexKey, double> raw;
  double total = 0.0;
  for (const auto& s : simplices) {
    if (keep(rng)) total += raw[s] = u(rng);
  }
  if (raw.empty()) {
    const auto pick = std::uniform_int_distribution<std::size_t>(0, simplices.size() - 1)(rng);
    raw[simplices[pick]] = 1.0;
    total = 1.0;
  }
  for (auto& [s, p] : raw) p /= total;
  return SimplexMeasure(vertex_count, maxdim, std::move(raw));
}

std::vector<CrispComplex> all_complexes(int vertex_count, int maxdim) {
  const FacePoset fp = face_poset(vertex_count, maxdim);
  std::vector<CrispComplex> out;
  for (const auto& down : enumerate_down_sets(fp.poset)) {
    std::set<SimplexKey> present;
    for (std::size_t i = 0; i < fp.simplices.size(); ++i) {
      if (down.contains(i)) present.insert(fp.simplices[i]);
    }
    out.emplace_back(vertex_count, maxdim, std::move(present));
  }
  return out;
}

ComplexMeasure random_complex_measure(Rng& rng, int vertex_count, int maxdim) {
  auto complexes = all_complexes(vertex_count, maxdim);
  const auto w = uniform_vector(rng, complexes.size());
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<ComplexMeasure::Entry> support;
  for (std::size_t i = 0; i < complexes.size(); ++i) support.push_back({std::move(complexes[i]), w[i] / total});
  return ComplexMeasure(vertex_count, maxdim, std::move(support));
}

DistanceMatrix random_planar_metric(Rng& rng, int n) {
  const auto xy = uniform_vector(rng, static_cast<std::size_t>(2 * n));
  return DistanceMatrix::from_points(xy, static_cast<std::size_t>(n), 2);
}

LawResult law_marginal_roundtrip(std::uint64_t seed, int count) {
  Tally t("marginal-roundtrip", 1e-12);
  Rng rng(seed);
  std::uniform_int_distribution<int> vertices(1, 5);
  for (int c = 0; c < count; ++c) {
    const FuzzyComplex f = random_monotone_complex(rng, vertices(rng), 2);
    const FuzzyComplex back = marginal(level_set_preimage(f));
    for (const auto& s : all_simplices(f.vertex_count(), f.maxdim())) {
      t.check(back.weight(s), f.weight(s), "case " + std::to_string(c) + ", simplex " + describe(s));
    }
    ++t.result.cases;
  }
  return t.done();
}

LawResult law_moebius_roundtrip(std::uint64_t seed, int count) {
  Tally t("moebius-roundtrip", 1e-12);
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_int_distribution<std::int64_t> value(-1000, 1000);
  std::uniform_int_distribution<int> vertices(1, 4);
  for (int c = 0; c < count; ++c) {
    const std::string where = "case " + std::to_string(c);
    const FinitePoset poset = random_poset(rng, size(rng));
    const MoebiusTable mu = moebius(poset);
    std::vector<std::int64_t> exact(poset.size());
    for (auto& v : exact) v = value(rng);
    const auto exact_back = moebius_invert<std::int64_t>(poset, mu, zeta_transform<std::int64_t>(poset, exact));
    if (exact_back != exact) t.fail(where + ": integer zeta/Moebius roundtrip differs");
    const auto real = uniform_vector(rng, poset.size());
    const auto real_back = moebius_invert<double>(poset, mu, zeta_transform<double>(poset, real));
    for (std::size_t i = 0; i < real.size(); ++i) t.check(real_back[i], real[i], where + ", element " + std::to_string(i));

    const SimplexMeasure q = random_simplex_measure(rng, vertices(rng), 2);
    const SimplexMeasure q_back = cdm_invert(cdm_marginal(q));
    for (const auto& s : all_simplices(q.vertex_count(), q.maxdim())) {
      t.check(q_back.probability(s), q.probability(s), where + ", cdm simplex " + describe(s));
    }
    ++t.result.cases;
  }
  return t.done();
}

LawResult law_cdm_nonsurjective() {
  Tally t("cdm-nonsurjective", 0.0);
  t.result.cases = 1;
  FuzzyComplex f(4, 1);
  for (const auto& s : std::vector<SimplexKey>{{0}, {1}, {2}, {3}, {0, 1}, {2, 3}}) f.set(s, 1.0);
  try {
    cdm_invert(f);
    t.fail("two disjoint crisp edges [0,1], [2,3] received a preimage");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoPreimage) throw;
    t.result.detail = "NoPreimage found for two disjoint crisp edges [0,1], [2,3], as required";
  }
  return t.done();
}

LawResult law_merge(std::uint64_t seed, int random_pairs) {
  Tally t("merge", 1e-12);
  const auto complexes = all_complexes(3, 1);
  const auto simplices = all_simplices(3, 1);
  auto check_pair = [&](const ComplexMeasure& p1, const ComplexMeasure& p2, const std::string& where) {
    const FuzzyComplex m1 = marginal(p1);
    const FuzzyComplex m2 = marginal(p2);
    const FuzzyComplex m_or = marginal(boolean_merge(p1, p2, BoolOp::Or));
    const FuzzyComplex m_and = marginal(boolean_merge(p1, p2, BoolOp::And));
    for (const auto& s : simplices) {
      const double a = m1.weight(s);
      const double b = m2.weight(s);
      t.check(m_or.weight(s), a + b - a * b, where + ", OR at " + describe(s));
      t.check(m_and.weight(s), a * b, where + ", AND at " + describe(s));
    }
    ++t.result.cases;
  };
  for (std::size_t i = 0; i < complexes.size(); ++i) {
    for (std::size_t j = 0; j < complexes.size(); ++j) {
      check_pair(ComplexMeasure::delta(complexes[i]), ComplexMeasure::delta(complexes[j]),
                 "delta pair " + std::to_string(i) + "," + std::to_string(j));
    }
  }
  Rng rng(seed);
  for (int c = 0; c < random_pairs; ++c) {
    const ComplexMeasure p1 = random_complex_measure(rng, 3, 1);
    const ComplexMeasure p2 = random_complex_measure(rng, 3, 1);
    check_pair(p1, p2, "random pair " + std::to_string(c));
  }
  return t.done();
}

LawResult law_order_of_operations() {
  Tally t("order-of-operations", 0.0);
  const DistanceMatrix d1({{0.0, 1.0, 2.0}, {1.0, 0.0, 1.5}, {2.0, 1.5, 0.0}});
  const DistanceMatrix d2({{0.0, 2.0, 1.0}, {2.0, 0.0, 1.5}, {1.0, 1.5, 0.0}});
  const auto phi = ScaleDistribution::exponential(1.0);
  const FuzzyComplex before = marginal(merged_filtration_measure(d1, d2, phi, 2, BoolOp::And));
  const FuzzyComplex after = merge(fuzzy_from_filtration(d1, phi, 2, FiltrationKind::VR),
                                   fuzzy_from_filtration(d2, phi, 2, FiltrationKind::VR), FuzzyOp::Product);
  double gap = 0.0;
  for (const auto& s : all_simplices(3, 2)) {
    const double scale = std::max(vr_scale(s, d1), vr_scale(s, d2));
    t.check(before.weight(s), 1.0 - phi.cdf(scale), "merge-then-average at " + describe(s));
    gap = std::max(gap, std::abs(before.weight(s) - after.weight(s)));
  }
  t.result.cases = 1;
  if (!(gap > 1e-3)) t.fail("average-then-merge gap " + num(gap) + " is not above 1e-3");
  if (t.result.passed) t.result.detail = "max gap between the two orders " + num(gap);
  t.result.max_error = gap;
  return t.done();
}

LawResult law_ce_kl(std::uint64_t seed, int count) {
  Tally t("ce-kl", 1e-9);
  Rng rng(seed);
  std::uniform_int_distribution<int> vertices(2, 4);
  std::uniform_real_distribution<double> prob(0.05, 0.95);
  for (int c = 0; c < count; ++c) {
    const int n = vertices(rng);
    EdgeIndependentMeasure e1{n, {}};
    EdgeIndependentMeasure e2{n, {}};
    for (const auto& s : all_simplices(n, 1)) {
      if (s.dim() != 1) continue;
      e1.edge_prob[s] = prob(rng);
      e2.edge_prob[s] = prob(rng);
    }
    const CeKlReport r = verify_ce_equals_kl(e1, e2);
    t.check(r.cross_entropy, r.kl, "case " + std::to_string(c));
    ++t.result.cases;
  }
  return t.done();
}

LawResult law_ce_kl_dependent() {
  Tally t("ce-kl-dependent", 0.0);
  t.result.cases = 1;
  const CrispComplex bare = CrispComplex::closure(3, 2, {{0}, {1}, {2}});
  const CrispComplex full = CrispComplex::closure(3, 2, {{0, 1, 2}});
  const ComplexMeasure p(3, 2, {{bare, 0.5}, {full, 0.5}});
  std::map<SimplexKey, double> conditional{{{0}, 1.0},    {{1}, 1.0},    {{2}, 1.0},      {{0, 1}, 0.5},
                                           {{0, 2}, 0.5}, {{1, 2}, 0.5}, {{0, 1, 2}, 1.0}};
  const ComplexMeasure q = locally_markov_measure(3, 2, conditional);
  const CeKlReport r = ce_kl_gap(p, q);
  t.result.max_error = r.gap;
  if (!(r.gap > 1e-3)) {
    t.fail("CE " + num(r.cross_entropy) + " and KL " + num(r.kl) + " agree on a dependent measure");
  } else {
    t.result.detail = "CE " + num(r.cross_entropy) + " vs KL " + num(r.kl);
  }
  return t.done();
}

LawResult law_filtration_marginal(std::uint64_t seed, int count) {
  Tally t("filtration-marginal", 1e-12);
  Rng rng(seed);
  std::uniform_int_distribution<int> points(2, 5);
  const std::vector<ScaleDistribution> cdfs{ScaleDistribution::exponential(0.5), ScaleDistribution::weibull(0.7, 2.0)};
  for (int c = 0; c < count; ++c) {
    const DistanceMatrix d = random_planar_metric(rng, points(rng));
    for (const auto& cdf : cdfs) {
      for (const auto kind : {FiltrationKind::VR, FiltrationKind::CechExtrinsic}) {
        const std::string where = "case " + std::to_string(c) + " " + cdf.to_string() +
                                  (kind == FiltrationKind::VR ? " VR" : " Cech");
        const ComplexMeasure m = filtration_measure(d, cdf, 2, kind);
        double total = 0.0;
        for (const auto& e : m.support()) total += e.p;
        t.check(total, 1.0, where + ", total probability");
        const FuzzyComplex f = marginal(m);
        for (const auto& s : all_simplices(static_cast<int>(d.size()), 2)) {
          t.check(f.weight(s), 1.0 - cdf.cdf(appearance_scale(s, d, kind)), where + ", simplex " + describe(s));
        }
      }
    }
    ++t.result.cases;
  }
  return t.done();
}

LawResult law_rank_order(std::uint64_t seed, int count) {
  Tally t("rank-order", 1e-12);
  Rng rng(seed);
  std::uniform_int_distribution<int> points(2, 5);
  const std::vector<ScaleDistribution> cdfs{ScaleDistribution::exponential(0.5), ScaleDistribution::weibull(0.7, 2.0)};
  for (int c = 0; c < count; ++c) {
    const int n = points(rng);
    const DistanceMatrix d = random_planar_metric(rng, n);
    std::vector<std::pair<SimplexKey, double>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) edges.push_back({SimplexKey{i, j}, d(i, j)});
    }
    const auto& cdf = cdfs[static_cast<std::size_t>(c) % cdfs.size()];
    const RankOrderChain chain = RankOrderChain::build(edges, cdf);
    const std::size_t m = chain.links.size();
    double total = 0.0;
    for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
      std::vector<bool> present(m);
      bool monotone = true;
      for (std::size_t a = 0; a < m; ++a) {
        present[a] = (bits >> a) & 1u;
        if (a > 0 && present[a] && !present[a - 1]) monotone = false;
      }
      const std::string where = "case " + std::to_string(c) + ", pattern " + std::to_string(bits);
      const double joint = rank_order_joint(chain, present);
      t.check(rank_order_chain_factorization(chain, present), joint, where + " factorization");
      if (!monotone) t.check(joint, 0.0, where + " non-monotone");
      total += joint;
    }
    t.check(total, 1.0, "case " + std::to_string(c) + ", total");
    t.check(rank_order_joint(chain, std::vector<bool>(m, true)), 1.0 - cdf.cdf(chain.links.back().distance),
            "case " + std::to_string(c) + ", all present");
    ++t.result.cases;
  }
  return t.done();
}

ComplexMeasure figure4_measure() {
  const auto c1 = CrispComplex::closure(6, 2, {{0, 1, 2}, {0, 3}, {1, 3}, {3, 4}, {3, 5}});
  const auto c2 = CrispComplex::closure(6, 2, {{0, 1, 2}, {3, 4, 5}});
  const auto c3 = CrispComplex::closure(6, 2, {{0, 3, 4}, {3, 4, 5}, {1, 2, 3}});
  const auto c4 = CrispComplex::closure(6, 2, {{0, 1}});
  return ComplexMeasure(6, 2, {{c1, 2.0 / 8.0}, {c2, 3.0 / 8.0}, {c3, 2.0 / 8.0}, {c4, 1.0 / 8.0}});
}

LawResult law_figure4() {
  Tally t("figure4", 1e-12);
  t.result.cases = 1;
  const FuzzyComplex f = marginal(figure4_measure());
  const double tri = f.weight({3, 4, 5});
  const double vertex = f.weight({2});
  t.check(tri, 0.625, "mu([x3,x4,x5])");
  t.check(vertex, 0.875, "mu([x2])");
  if (!check_monotone(f).ok()) t.fail("marginal is not monotone");
  if (t.result.passed) t.result.detail = "mu([x3,x4,x5]) = " + num(tri) + ", mu([x2]) = " + num(vertex);
  return t.done();
}

std::string format_law_report(const std::vector<LawResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.law << " (" << r.cases << " cases, max deviation " << num(r.max_error)
       << ")";
    if (!r.detail.empty()) os << ": " << r.detail;
    os << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const std::vector<LawResult>& results) {
  nlohmann::json laws = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    laws.push_back({{"law", r.law}, {"passed", r.passed}, {"cases", r.cases}, {"maxError", r.max_error},
                    {"detail", r.detail}});
  }
  return {{"passed", all}, {"laws", laws}};
}

}  // namespace fuzzydr
