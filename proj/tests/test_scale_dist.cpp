#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "fuzzydr/error.hpp"
#include "fuzzydr/scale_dist.hpp"

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

std::vector<double> grid(double hi, int steps) {
  std::vector<double> g;
  for (int i = 0; i <= steps; ++i) g.push_back(hi * i / steps);
  return g;
}

std::vector<ScaleDistribution> families() {
  return {ScaleDistribution::exponential(1.0),   ScaleDistribution::exponential(0.3),
          ScaleDistribution::weibull(1.0, 0.5),  ScaleDistribution::weibull(2.0, 3.0),
          ScaleDistribution::loglogistic(1, 1),  ScaleDistribution::loglogistic(1.577, 0.8951)};
}

WeightToDistanceFn neg_log() { return {[](double x) { return -std::log(x); }, 0.0, 1.0, true}; }

}  // namespace

TEST_CASE("family formulas") {
  const auto e = ScaleDistribution::exponential(1.0);
  CHECK(e.cdf(1.0) == doctest::Approx(0.632121).epsilon(1e-6));
  CHECK(e.survival(2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  const auto ll = ScaleDistribution::loglogistic(1.0, 1.0);
  CHECK(ll.survival(1.0) == 0.5);
  CHECK(ll.survival(3.0) == doctest::Approx(0.1));
  const auto w = ScaleDistribution::weibull(2.0, 3.0);
  CHECK(w.cdf(2.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  for (const auto& d : families()) {
    CHECK(d.cdf(0.0) == 0.0);
    CHECK(d.survival(0.0) == 1.0);
    CHECK(code_of([&] { d.cdf(-1.0); }) == ErrorCode::NegativeScale);
  }
  CHECK(code_of([] { ScaleDistribution::exponential(0.0); }) == ErrorCode::NonPositiveParam);
  CHECK(code_of([] { ScaleDistribution::weibull(1.0, -2.0); }) == ErrorCode::NonPositiveParam);
}

TEST_CASE("exponential survival is the exponential weight") {
  for (double nu : {0.5, 1.0, 3.0}) {
    const auto e = ScaleDistribution::exponential(nu);
    for (double t : grid(5.0, 50)) CHECK(std::abs(e.survival(t) - std::exp(-t / nu)) <= 1e-12);
  }
}

TEST_CASE("densities integrate the CDF") {
  for (const auto& d : families()) {
    for (double t : {0.3, 1.0, 2.5}) {
      const double h = 1e-6;
      CHECK(d.density(t) == doctest::Approx((d.cdf(t + h) - d.cdf(t - h)) / (2 * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("parsing and printing") {
  CHECK(ScaleDistribution::parse("exponential:nu=2") == ScaleDistribution::exponential(2));
  CHECK(ScaleDistribution::parse("weibull:lambda=1,k=0.5") == ScaleDistribution::weibull(1, 0.5));
  CHECK(ScaleDistribution::parse("loglogistic:a=1.577,b=0.8951") == ScaleDistribution::loglogistic(1.577, 0.8951));
  for (const auto& d : families()) CHECK(ScaleDistribution::parse(d.to_string()) == d);
  CHECK(code_of([] { ScaleDistribution::parse("gamma:k=1"); }) == ErrorCode::BadParams);
  CHECK(code_of([] { ScaleDistribution::parse("exponential:mu=1"); }) == ErrorCode::BadParams);
  CHECK(ScaleDistribution::parse("weibull:lambda=2") == ScaleDistribution::weibull(2, 1));
  CHECK(ScaleDistribution::parse("exponential") == ScaleDistribution::exponential(1));
  CHECK(code_of([] { ScaleDistribution::parse("exponential:nu=x"); }) == ErrorCode::BadParams);
}

TEST_CASE("UMAP parameter conversion") {
  const auto s = umap_param_convert(1.0, 1.0);
  CHECK(s.alpha == 1.0);
  CHECK(s.beta == 2.0);
  const auto q = umap_param_convert(4.0, 0.5);
  CHECK(q.alpha == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(q.beta == 1.0);
  CHECK(code_of([] { umap_param_convert(0.0, 1.0); }) == ErrorCode::NonPositiveParam);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int rep = 0; rep < 100; ++rep) {
    const double a = u(rng), b = u(rng);
    const auto [a2, b2] = umap_param_unconvert(umap_param_convert(a, b));
    CHECK(std::abs(a2 - a) <= 1e-12 * a);
    CHECK(std::abs(b2 - b) <= 1e-12 * b);
    // The standard form describes the same survival function.
    const auto st = umap_param_convert(a, b);
    const double t = u(rng);
    CHECK(ScaleDistribution::loglogistic(a, b).survival(t) ==
          doctest::Approx(1.0 - 1.0 / (1.0 + std::pow(t / st.alpha, -st.beta))).epsilon(1e-12));
  }
}

TEST_CASE("generalized inverse examples") {
  const auto f = neg_log();
  CHECK(std::abs(generalized_inverse(f, 1.0) - std::exp(-1.0)) <= 1e-10);
  CHECK(generalized_inverse(f, 0.0) == 1.0);
  // Step: 2 on [0, 0.5], 1 on (0.5, 1].
  const WeightToDistanceFn step{[](double x) { return x <= 0.5 ? 2.0 : 1.0; }, 0.0, 1.0, true};
  CHECK(std::abs(generalized_inverse(step, 1.5) - 0.5) <= 1e-10);
  CHECK(generalized_inverse(step, 1.0) == 1.0);
  CHECK(generalized_inverse(step, 3.0) == 0.0);
}

TEST_CASE("generalized inverse of an injective function is its inverse") {
  const auto f = neg_log();
  for (double x : grid(1.0, 40)) {
    if (x <= 0.0) continue;
    CHECK(std::abs(generalized_inverse(f, f.eval(x)) - x) <= 1e-8);
  }
  const WeightToDistanceFn cube{[](double x) { return std::pow(1.0 - x, 3.0) * 4.0; }, 0.0, 1.0, true};
  for (double x : grid(1.0, 40)) CHECK(std::abs(generalized_inverse(cube, cube.eval(x)) - x) <= 1e-8);
}

TEST_CASE("generalized inverse is decreasing and bounds its preimage") {
  const WeightToDistanceFn step{[](double x) { return x <= 0.25 ? 3.0 : (x <= 0.75 ? 1.0 : 0.5); }, 0.0, 1.0, true};
  double previous = 2.0;
  for (double y : grid(4.0, 80)) {
    const double inv = generalized_inverse(step, y);
    CHECK(inv <= previous + 1e-12);
    previous = inv;
    for (double x : grid(1.0, 40)) {
      if (step.eval(x) >= y) CHECK(x <= inv + 1e-9);
    }
  }
}

TEST_CASE("survival function checks") {
  for (const auto& d : families()) {
    const auto report = is_survival_function([&](double t) { return d.survival(t); }, grid(1e4, 2000));
    CHECK(report.ok());
  }
  const auto f = neg_log();
  const auto inv = is_survival_function([&](double y) { return generalized_inverse(f, y); }, grid(40.0, 400));
  CHECK(inv.ok());

  const auto bad = is_survival_function([](double t) { return t; }, grid(1.0, 10));
  CHECK_FALSE(bad.ok());
  CHECK_FALSE(bad.decreasing);
  REQUIRE(bad.witness.has_value());

  const auto left = is_survival_function([](double t) { return t < 1.0 ? 1.0 : 0.0; }, grid(2.0, 4));
  CHECK(left.ok());
  const auto right_gap = is_survival_function([](double t) { return t <= 1.0 ? 1.0 : 0.0; }, grid(2.0, 4));
  CHECK_FALSE(right_gap.right_continuous);
  const auto slow = is_survival_function([](double t) { return 1.0 / (1.0 + t); }, grid(10.0, 10));
  CHECK_FALSE(slow.vanishes);
}
