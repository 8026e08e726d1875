// Acceptance run: one PASS/FAIL line per criterion, each with its runtime
// budget. `--only N` (repeatable) restricts the run.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>

#include "fuzzydr/commands.hpp"
#include "fuzzydr/embed.hpp"
#include "fuzzydr/eval.hpp"
#include "fuzzydr/filtrations.hpp"
#include "fuzzydr/io.hpp"
#include "fuzzydr/posetlab.hpp"
#include "fuzzydr/synth.hpp"
#include "persistence_oracle.hpp"

using namespace fuzzydr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome from_laws(const std::vector<LawResult>& laws) {
  Outcome o{true, ""};
  for (const auto& l : laws) {
    o.passed = o.passed && l.passed;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += l.law + (l.passed ? " ok" : " FAILED") + " (" + std::to_string(l.cases) + " cases, max dev " +
                fmt(l.max_error) + ")";
    if (!l.passed) o.detail += ": " + l.detail;
  }
  return o;
}

DistanceMatrix distances(const Eigen::MatrixXd& x) {
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = x;
  return DistanceMatrix::from_points({rm.data(), static_cast<std::size_t>(rm.size())},
                                     static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(x.cols()));
}

Eigen::MatrixXd centred(const Eigen::MatrixXd& m) { return m.rowwise() - m.colwise().mean(); }

Outcome geometry() {
  const double r345 = cech3_radius(3, 4, 5);
  const double req = cech3_radius(1, 1, 1);
  bool ok = std::abs(r345 - 2.5) <= 1e-12 && std::abs(req - 1.0 / std::sqrt(3.0)) <= 1e-9;
  Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0;
  for (int rep = 0; rep < 10000; ++rep) {
    Eigen::MatrixXd p(3, 2);
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = u(rng);
    const auto d = distances(p);
    const double r = cech3_radius(d(0, 1), d(1, 2), d(0, 2));
    const double dmax = std::max({d(0, 1), d(1, 2), d(0, 2)});
    if (!(dmax / 2.0 <= r && r <= dmax / std::sqrt(3.0) * (1.0 + 1e-9))) ++violations;
  }
  ok = ok && violations == 0;
  return {ok, "r(3,4,5) = " + fmt(r345) + ", r(1,1,1) = " + fmt(req) + ", " + std::to_string(violations) +
                  " interleaving violations in 10^4 triangles"};
}

// Finite-difference check of an analytic gradient.
double relative_gradient_error(const std::function<double(const Eigen::MatrixXd&)>& loss, const Eigen::MatrixXd& y,
                               const Eigen::MatrixXd& grad) {
  const double h = 1e-5;
  Eigen::MatrixXd fd(y.rows(), y.cols());
  Eigen::MatrixXd probe = y;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      probe(i, j) = y(i, j) + h;
      const double up = loss(probe);
      probe(i, j) = y(i, j) - h;
      const double down = loss(probe);
      probe(i, j) = y(i, j);
      fd(i, j) = (up - down) / (2.0 * h);
    }
  }
  return (grad - fd).norm() / std::max(fd.norm(), 1e-12);
}

// At least `gap` from the right-angle boundary and from ties for the longest side.
bool smooth_triangle(const Eigen::MatrixXd& y, const Triplet& t, double gap) {
  double s[3] = {(y.row(t.i) - y.row(t.j)).norm(), (y.row(t.j) - y.row(t.k)).norm(),
                 (y.row(t.k) - y.row(t.i)).norm()};
  std::sort(s, s + 3);
  const double dmax2 = s[2] * s[2];
  const double test = (s[0] * s[0] + s[1] * s[1] - dmax2) / dmax2;
  return std::abs(test) >= gap && (s[2] - s[1]) / s[2] >= gap && s[0] / s[2] >= gap;
}

Outcome gradients() {
  Rng rng(2024);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_real_distribution<double> w(0.05, 0.95);
  const ScaleDistribution dists[] = {ScaleDistribution::loglogistic(1, 1), ScaleDistribution::loglogistic(1.577, 0.8951),
                                     ScaleDistribution::weibull(1.0, 0.5), ScaleDistribution::exponential(1.0)};
  double worst_triplet = 0.0;
  int checked = 0;
  while (checked < 200) {
    Eigen::MatrixXd y(6, 2);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = u(rng);
    const TripletBatch batch{{{0, 1, 2}, {1, 3, 4}}, {w(rng), w(rng)}, {{2, 4, 5}, {0, 3, 5}}};
    bool smooth = true;
    for (const auto& t : batch.positives) smooth = smooth && smooth_triangle(y, t, 1e-3);
    for (const auto& t : batch.negatives) smooth = smooth && smooth_triangle(y, t, 1e-3);
    if (!smooth) continue;
    const auto& dist = dists[checked % 4];
    const auto lg = triplet_loss_and_grad(batch, y, dist, 1e-12);
    const auto loss = [&](const Eigen::MatrixXd& z) { return triplet_loss_and_grad(batch, z, dist, 1e-12).loss; };
    worst_triplet = std::max(worst_triplet, relative_gradient_error(loss, y, lg.grad));
    ++checked;
  }
  double worst_edge = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::MatrixXd y(5, 2);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = u(rng);
    const std::vector<EdgeSample> edges{{0, 1, w(rng)}, {1, 2, w(rng)}, {2, 3, w(rng)}, {0, 4, w(rng)}};
    const auto& dist = dists[rep % 4];
    const auto lg = edge_umap_loss_and_grad(edges, y, dist, 1e-12);
    const auto loss = [&](const Eigen::MatrixXd& z) { return edge_umap_loss_and_grad(edges, z, dist, 1e-12).loss; };
    worst_edge = std::max(worst_edge, relative_gradient_error(loss, y, lg.grad));
  }
  return {worst_triplet <= 1e-4 && worst_edge <= 1e-4,
          "max relative error triplet " + fmt(worst_triplet) + ", edge " + fmt(worst_edge) + " over 200 + 200 configs"};
}

// Lloyd's algorithm with two centres seeded at the first point and the point
// farthest from it; returns the cluster purity against the labels.
double two_means_purity(const Eigen::MatrixXd& y, const std::vector<int>& labels) {
  const Eigen::Index n = y.rows();
  Eigen::Index far = 0;
  (y.rowwise() - y.row(0)).rowwise().squaredNorm().maxCoeff(&far);
  Eigen::RowVectorXd c[2] = {y.row(0), y.row(far)};
  std::vector<int> assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int a = (y.row(i) - c[0]).squaredNorm() <= (y.row(i) - c[1]).squaredNorm() ? 0 : 1;
      changed = changed || a != assign[static_cast<std::size_t>(i)];
      assign[static_cast<std::size_t>(i)] = a;
    }
    Eigen::RowVectorXd sum[2] = {Eigen::RowVectorXd::Zero(y.cols()), Eigen::RowVectorXd::Zero(y.cols())};
    int count[2] = {0, 0};
    for (Eigen::Index i = 0; i < n; ++i) {
      sum[assign[static_cast<std::size_t>(i)]] += y.row(i);
      ++count[assign[static_cast<std::size_t>(i)]];
    }
    for (int a = 0; a < 2; ++a) {
      if (count[a] > 0) c[a] = sum[a] / count[a];
    }
    if (!changed && iter > 0) break;
  }
  std::map<std::pair<int, int>, int> table;
  for (Eigen::Index i = 0; i < n; ++i) ++table[{assign[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(i)]}];
  int majority = 0;
  for (int a = 0; a < 2; ++a) {
    int best = 0;
    for (const auto& [key, count] : table) {
      if (key.first == a) best = std::max(best, count);
    }
    majority += best;
  }
  return static_cast<double>(majority) / static_cast<double>(n);
}

Outcome embedding_quality() {
  bool ok = true;
  std::string detail = "blobs T/purity:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset d = synth(SynthKind::Blobs, {{"n", 500}, {"c", 2}, {"d", 10}, {"sep", 10}}, seed);
    TrainConfig cfg;
    cfg.seed = seed;
    const TrainResult r = train(d, cfg);
    const double t = trustworthiness(d.points, r.y, 15);
    const double purity = two_means_purity(r.y, d.labels);
    ok = ok && t >= 0.90 && purity >= 0.98;
    detail += " " + fmt(t) + "/" + fmt(purity);
  }
  detail += "; circle H1 W2 embedding vs Gaussian control:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset d = synth(SynthKind::Circle, {{"n", 300}}, seed);
    TrainConfig cfg;
    cfg.seed = seed;
    const TrainResult r = train(d, cfg);
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd control(300, 2);
    for (Eigen::Index i = 0; i < control.size(); ++i) control(i) = normal(rng);
    // Both embeddings are centred and scaled to the Frobenius norm of the centred input.
    const double target = centred(d.points).norm();
    const Eigen::MatrixXd y = centred(r.y) * (target / centred(r.y).norm());
    const Eigen::MatrixXd z = centred(control) * (target / centred(control).norm());
    EvalConfig ec;
    ec.seed = seed;
    ec.threads = worker_threads();
    const double wy = evaluate(d.points, y, ec).wassersteinH1;
    const double wz = evaluate(d.points, z, ec).wassersteinH1;
    ok = ok && wy < wz;
    detail += " " + fmt(wy) + "<" + fmt(wz) + (wy < wz ? "" : "(no)");
  }
  return {ok, detail};
}

Outcome metric_sanity() {
  const Dataset c = synth(SynthKind::Circle, {{"n", 300}, {"noise", 0.05}}, 1);
  EvalConfig ec;
  ec.threads = worker_threads();
  const MetricReport id = evaluate(c.points, c.points, ec);
  const Dataset b = synth(SynthKind::Blobs, {}, 1);
  const MetricReport pca = evaluate(b.points, pca_init(b.points, 2, 0).y, ec);
  const bool ok = id.trustworthiness == 1.0 && id.wassersteinH0 == 0.0 && id.wassersteinH1 == 0.0 &&
                  std::abs(pca.procrustesG - 1.0) <= 1e-6;
  return {ok, "identity T = " + fmt(id.trustworthiness) + ", W0 = " + fmt(id.wassersteinH0) +
                  ", W1 = " + fmt(id.wassersteinH1) + "; PCA G = " + fmt(pca.procrustesG)};
}

Outcome persistence_oracle() {
  std::vector<std::pair<std::string, Eigen::MatrixXd>> datasets;
  Rng rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 60; ++rep) {
    Eigen::MatrixXd x(3 + rep % 10, 2 + rep % 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = u(rng);
    datasets.emplace_back("random", x);
  }
  for (std::uint64_t s = 1; s <= 5; ++s) {
    datasets.emplace_back("circle", synth(SynthKind::Circle, {{"n", 12}, {"noise", 0.05}}, s).points);
    datasets.emplace_back("blobs", synth(SynthKind::Blobs, {{"n", 12}, {"d", 3}, {"sep", 3}}, s).points);
    datasets.emplace_back("swiss_lite", synth(SynthKind::SwissLite, {{"n", 12}}, s).points);
  }
  Eigen::MatrixXd grid(12, 2);
  for (int i = 0; i < 12; ++i) grid.row(i) << i % 4, i / 4;
  datasets.emplace_back("grid", grid);
  Eigen::MatrixXd hexagon(6, 2);
  for (int i = 0; i < 6; ++i) hexagon.row(i) << std::cos(i * M_PI / 3.0), std::sin(i * M_PI / 3.0);
  datasets.emplace_back("hexagon", hexagon);
  Eigen::MatrixXd dup(6, 2);
  dup << 0, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1, 1;
  datasets.emplace_back("duplicates", dup);

  int compared = 0;
  int mismatches = 0;
  std::string first_bad;
  for (const auto& [name, x] : datasets) {
    const DistanceMatrix d = distances(x);
    for (std::optional<double> cap : {std::optional<double>{}, std::optional<double>{0.6 * enclosing_radius(d)}}) {
      const auto fast = vr_persistence(d, 1, cap);
      const auto slow = testing::brute_force_persistence(d, cap);
      for (int p = 0; p <= 1; ++p) {
        ++compared;
        if (testing::positive_pairs(fast[static_cast<std::size_t>(p)]) != slow[static_cast<std::size_t>(p)].pairs) {
          ++mismatches;
          if (first_bad.empty()) first_bad = ", first mismatch on " + name + " H" + std::to_string(p);
        }
      }
    }
  }
  return {mismatches == 0, std::to_string(compared) + " diagrams on " + std::to_string(datasets.size()) +
                               " datasets, " + std::to_string(mismatches) + " mismatches" + first_bad};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("fuzzydr_acceptance_" + std::to_string(std::random_device{}()));
  auto embed = [&](const std::string& sub) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli({"fuzzydr", "embed", "--in", "blobs", "--mode", "triplet", "--k", "15", "--epochs", "200",
                              "--seed", "1", "--out", (dir / sub).string()},
                             out, err);
    return code == kExitOk ? read_text((dir / sub / "embedding.csv").string()) : std::string();
  };
  const std::string a = embed("a");
  const std::string b = embed("b");
  std::error_code ec;
  fs::remove_all(dir, ec);
  const bool ok = !a.empty() && a == b;
  return {ok, ok ? "two runs wrote identical " + std::to_string(a.size()) + "-byte embedding CSVs"
                 : "embedding CSVs differ or a run failed"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks for fuzzydr"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "Figure-4 marginal weights", 1, [] { return from_laws({law_figure4()}); }},
      {2, "marginal map surjectivity", 5, [] { return from_laws({law_marginal_roundtrip(1, 200)}); }},
      {3, "Moebius and cdm roundtrips", 5,
       [] { return from_laws({law_moebius_roundtrip(1, 100), law_cdm_nonsurjective()}); }},
      {4, "merge laws", 10, [] { return from_laws({law_merge(1), law_order_of_operations()}); }},
      {5, "CE = KL", 10, [] { return from_laws({law_ce_kl(1, 100), law_ce_kl_dependent()}); }},
      {6, "filtration-measure identities", 10,
       [] { return from_laws({law_filtration_marginal(1), law_rank_order(1)}); }},
      {7, "Cech geometry", 5, geometry},
      {8, "gradient checks", 30, gradients},
      {9, "embedding quality", 300, embedding_quality},
      {10, "metric sanity", 30, metric_sanity},
      {11, "persistence oracle", 60, persistence_oracle},
      {12, "determinism", 60, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    if (!in_time) o.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
    const bool passed = o.passed && in_time;
    failures += !passed;
    std::printf("%s %2d %s (%.2f s): %s\n", passed ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
