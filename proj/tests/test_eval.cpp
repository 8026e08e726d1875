#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>

#include "fuzzydr/embed.hpp"
#include "fuzzydr/eval.hpp"
#include "fuzzydr/synth.hpp"
#include "persistence_oracle.hpp"

using namespace fuzzydr;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Usage;
}

DistanceMatrix distances(const Eigen::MatrixXd& x) {
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = x;
  return DistanceMatrix::from_points({rm.data(), static_cast<std::size_t>(rm.size())},
                                     static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(x.cols()));
}

Eigen::MatrixXd gaussian(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
  return x;
}

Eigen::MatrixXd rotation(double angle) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

Eigen::MatrixXd fixture_x() {
  Eigen::MatrixXd x(30, 3);
  for (int i = 0; i < 30; ++i) x.row(i) << std::sin(i), std::cos(2.0 * i), i / 10.0;
  return x;
}

Eigen::MatrixXd fixture_y() {
  Eigen::MatrixXd y(30, 2);
  for (int i = 0; i < 30; ++i) y.row(i) << std::sin(i) + 0.3 * std::cos(3.0 * i), i / 10.0;
  return y;
}

PersistenceDiagram diagram(int degree, std::vector<std::pair<double, double>> pairs) {
  PersistenceDiagram d;
  d.degree = degree;
  for (auto [b, e] : pairs) d.pairs.push_back({b, e, false});
  return d;
}

PersistenceDiagram random_diagram(Rng& rng, int degree) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_int_distribution<int> count(0, 6);
  PersistenceDiagram d;
  d.degree = degree;
  const int c = count(rng);
  for (int i = 0; i < c; ++i) {
    const double b = u(rng);
    d.pairs.push_back({b, b + u(rng), false});
  }
  return d;
}

void check_against_oracle(const DistanceMatrix& d, std::optional<double> cap) {
  const auto fast = vr_persistence(d, 1, cap);
  const auto slow = testing::brute_force_persistence(d, cap);
  for (int p = 0; p <= 1; ++p) {
    const auto got = testing::positive_pairs(fast[static_cast<std::size_t>(p)]);
    const auto want = slow[static_cast<std::size_t>(p)].pairs;
    CHECK(got == want);
  }
}

}  // namespace

TEST_CASE("trustworthiness matches reference values") {
  const auto x = fixture_x();
  const auto y = fixture_y();
  CHECK(trustworthiness(x, y, 1) == doctest::Approx(0.8321428571428571).epsilon(1e-14));
  CHECK(trustworthiness(x, y, 3) == doctest::Approx(0.9053333333333333).epsilon(1e-14));
  CHECK(trustworthiness(x, y, 5) == doctest::Approx(0.9054545454545455).epsilon(1e-14));
  CHECK(trustworthiness(x, y, 10) == doctest::Approx(0.9062068965517242).epsilon(1e-14));
  CHECK(code_of([&] { trustworthiness(x, y, 15); }) == ErrorCode::KTooLarge);
  CHECK(code_of([&] { trustworthiness(x, y.topRows(20), 3); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("trustworthiness of identity, isometries and shuffles") {
  const auto x = gaussian(100, 2, 1);
  CHECK(trustworthiness(x, x, 5) == 1.0);
  const Eigen::MatrixXd moved = (x * rotation(0.7)).rowwise() + Eigen::RowVector2d(3.0, -1.0);
  CHECK(trustworthiness(x, moved, 5) == 1.0);
  Eigen::MatrixXd mirrored = x;
  mirrored.col(0) *= -1.0;
  CHECK(trustworthiness(x, mirrored, 5) == 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<int> perm(100);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd shuffled(100, 2);
    for (int i = 0; i < 100; ++i) shuffled.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
    CHECK(trustworthiness(x, shuffled, 5) < 0.8);
  }
}

TEST_CASE("Procrustes global score") {
  const auto y = gaussian(60, 2, 2);
  CHECK(procrustes_global(y, y) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(procrustes_global(y * rotation(1.3), y) == doctest::Approx(1.0).epsilon(1e-12));
  Eigen::MatrixXd flipped = y;
  flipped.col(1) *= -1.0;
  CHECK(procrustes_global(flipped, y) == doctest::Approx(1.0).epsilon(1e-12));
  const Eigen::MatrixXd shifted = y.rowwise() + Eigen::RowVector2d(5, 5);
  CHECK(procrustes_global(shifted, y) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(procrustes_global(2.0 * y, y) == doctest::Approx(0.0).epsilon(1e-12));
  double previous = 1.0 + 1e-12;
  for (double s : {1.0, 1.1, 1.5, 2.0}) {
    const double g = procrustes_global(s * y, y);
    CHECK(g <= previous);
    previous = g;
  }
  CHECK(procrustes_global(0.5 * y, y) < 1.0);
  CHECK(code_of([&] { procrustes_global(y, Eigen::MatrixXd::Zero(60, 2)); }) == ErrorCode::ZeroNorm);
  CHECK(code_of([&] { procrustes_global(y, y.topRows(10)); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("persistence of an equilateral triangle") {
  const auto d = DistanceMatrix({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  const auto dg = vr_persistence(d, 1, 2.0);
  REQUIRE(dg.size() == 2);
  REQUIRE(dg[0].pairs.size() == 3);
  CHECK(dg[0].pairs[0] == PersistencePair{0.0, 1.0, false});
  CHECK(dg[0].pairs[1] == PersistencePair{0.0, 1.0, false});
  CHECK(dg[0].pairs[2] == PersistencePair{0.0, 2.0, true});
  CHECK(dg[1].pairs.empty());
  CHECK(enclosing_radius(d) == 1.0);
}

TEST_CASE("persistence of a square sees one loop") {
  const auto d = distances((Eigen::MatrixXd(4, 2) << 0, 0, 1, 0, 1, 1, 0, 1).finished());
  const auto dg = vr_persistence(d, 1, 3.0);
  REQUIRE(dg[1].pairs.size() == 1);
  CHECK(dg[1].pairs[0].birth == 1.0);
  CHECK(dg[1].pairs[0].death == doctest::Approx(std::sqrt(2.0)));
  const auto low = vr_persistence(d, 1, 1.2);
  REQUIRE(low[1].pairs.size() == 1);
  CHECK(low[1].pairs[0].essential);
  CHECK(low[1].pairs[0].death == 1.2);
}

TEST_CASE("persistence of a circle has one dominant loop") {
  const Dataset c = synth(SynthKind::Circle, {{"n", 60}}, 3);
  const auto d = distances(c.points);
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      dmax = std::max(dmax, d(i, j));
      if (d(i, j) > 0.0) dmin = std::min(dmin, d(i, j));
    }
  const auto dg = vr_persistence(d, 1);
  int big = 0;
  for (const auto& p : dg[1].pairs) big += p.death - p.birth > 0.5 * (dmax - dmin);
  CHECK(big == 1);
  const auto brute = testing::brute_force_persistence(distances(c.points.topRows(12)));
  CHECK(testing::positive_pairs(vr_persistence(distances(c.points.topRows(12)), 1)[1]) == brute[1].pairs);
}

TEST_CASE("two far clusters give one long H0 bar") {
  Eigen::MatrixXd x = gaussian(40, 2, 5) * 0.1;
  x.bottomRows(20).col(0).array() += 10.0;
  const auto dg = vr_persistence(distances(x), 0, 20.0);
  REQUIRE(dg.size() == 1);
  std::vector<double> deaths;
  for (const auto& p : dg[0].pairs)
    if (!p.essential) deaths.push_back(p.death);
  std::sort(deaths.begin(), deaths.end());
  CHECK(deaths.back() > 9.0);
  CHECK(deaths[deaths.size() - 2] < 1.0);
}

TEST_CASE("H0 bar count follows the component count") {
  Rng rng(14);
  for (int rep = 0; rep < 20; ++rep) {
    const auto x = gaussian(30, 2, static_cast<std::uint64_t>(rep));
    const auto d = distances(x);
    const double cap = 0.3 + 0.05 * rep;
    const auto dg = vr_persistence(d, 0, cap);
    // Components by breadth-first search at the cap.
    std::vector<int> comp(30, -1);
    int components = 0;
    for (int s = 0; s < 30; ++s) {
      if (comp[static_cast<std::size_t>(s)] >= 0) continue;
      std::vector<int> stack{s};
      comp[static_cast<std::size_t>(s)] = components;
      while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w = 0; w < 30; ++w) {
          if (comp[static_cast<std::size_t>(w)] < 0 && d(v, w) <= cap) {
            comp[static_cast<std::size_t>(w)] = components;
            stack.push_back(w);
          }
        }
      }
      ++components;
    }
    int essential = 0, finite = 0;
    for (const auto& p : dg[0].pairs) (p.essential ? essential : finite)++;
    CHECK(essential == components);
    CHECK(finite == 30 - components);
  }
}

TEST_CASE("persistence matches the brute-force rank oracle") {
  Rng rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 4 + rep % 9;
    Eigen::MatrixXd x(n, 2 + rep % 2);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
    const auto d = distances(x);
    check_against_oracle(d, std::nullopt);
    check_against_oracle(d, 0.5 * enclosing_radius(d));
  }
  // Integer grid: many equal distances.
  Eigen::MatrixXd grid(12, 2);
  for (int i = 0; i < 12; ++i) grid.row(i) << i % 4, i / 4;
  check_against_oracle(distances(grid), std::nullopt);
  check_against_oracle(distances(grid), 1.0);
  // Duplicated points.
  Eigen::MatrixXd dup(6, 2);
  dup << 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1;
  check_against_oracle(distances(dup), std::nullopt);
}

TEST_CASE("persistence cap") {
  const auto x = gaussian(401, 2, 1);
  CHECK(code_of([&] { vr_persistence(distances(x), 1); }) == ErrorCode::CapExceeded);
}

TEST_CASE("Hungarian assignment matches exhaustive search") {
  Rng rng(8);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + rep % 6;
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& row : cost)
      for (auto& c : row) c = std::floor(u(rng));
    const auto assign = hungarian(cost);
    double got = 0.0;
    for (int i = 0; i < n; ++i) got += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(got == best);
  }
}

TEST_CASE("Wasserstein distance between diagrams") {
  const auto a = diagram(1, {{0.0, 2.0}, {1.0, 1.5}});
  CHECK(wasserstein2(a, a) == 0.0);
  CHECK(wasserstein2(diagram(1, {{0.0, 2.0}}), diagram(1, {})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(wasserstein2(diagram(0, {}), diagram(0, {})) == 0.0);
  CHECK(wasserstein2(diagram(1, {{0.0, 2.0}}), diagram(1, {{0.0, 2.5}})) == doctest::Approx(0.5));
  auto with_essential = a;
  with_essential.pairs.push_back({0.0, 9.0, true});
  CHECK(wasserstein2(with_essential, a) == 0.0);
  CHECK(code_of([&] { wasserstein2(a, diagram(0, {})); }) == ErrorCode::DegreeMismatch);
}

TEST_CASE("Wasserstein distance is a pseudometric") {
  Rng rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    const auto a = random_diagram(rng, 1);
    const auto b = random_diagram(rng, 1);
    const auto c = random_diagram(rng, 1);
    CHECK(wasserstein2(a, b) == wasserstein2(b, a));
    CHECK(wasserstein2(a, c) <= wasserstein2(a, b) + wasserstein2(b, c) + 1e-9);
    CHECK(wasserstein2(a, b) >= 0.0);
  }
}

TEST_CASE("evaluation of the identity embedding") {
  const Dataset c = synth(SynthKind::Circle, {{"n", 150}, {"noise", 0.05}}, 2);
  EvalConfig cfg;
  cfg.subsample = 60;
  cfg.repeats = 4;
  const auto r = evaluate(c.points, c.points, cfg);
  CHECK(r.trustworthiness == 1.0);
  CHECK(r.procrustesG == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.wassersteinH0 == 0.0);
  CHECK(r.wassersteinH1 == 0.0);
  CHECK(r.k == 15);
  CHECK(r.subsample == 60);
  CHECK(r.repeats == 4);
}

TEST_CASE("PCA embeddings have a global score of one") {
  const Dataset b = synth(SynthKind::Blobs, {{"n", 200}}, 4);
  const auto pca = pca_init(b.points, 2, 1);
  EvalConfig cfg;
  cfg.subsample = 50;
  cfg.repeats = 2;
  CHECK(evaluate(b.points, pca.y, cfg).procrustesG == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("evaluation is deterministic and finite") {
  const Dataset b = synth(SynthKind::Blobs, {{"n", 200}}, 6);
  const auto y = gaussian(200, 2, 6);
  EvalConfig cfg;
  cfg.subsample = 80;
  cfg.repeats = 5;
  cfg.seed = 3;
  const auto r1 = evaluate(b.points, y, cfg);
  cfg.threads = 3;
  const auto r2 = evaluate(b.points, y, cfg);
  CHECK(r1.trustworthiness == r2.trustworthiness);
  CHECK(r1.procrustesG == r2.procrustesG);
  CHECK(r1.wassersteinH0 == r2.wassersteinH0);
  CHECK(r1.wassersteinH1 == r2.wassersteinH1);
  CHECK(std::isfinite(r1.wassersteinH0));
  CHECK(std::isfinite(r1.wassersteinH1));
  CHECK(r1.wassersteinH0 > 0.0);
  CHECK(code_of([&] { evaluate(b.points, y.topRows(100), cfg); }) == ErrorCode::ShapeMismatch);
}
