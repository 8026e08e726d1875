#include <doctest.h>

#include <cmath>
#include <functional>

#include "figure1.hpp"
#include "fuzzydr/error.hpp"
#include "fuzzydr/io.hpp"
#include "fuzzydr/posetlab.hpp"
#include "fuzzydr/svg.hpp"
#include "fuzzydr/synth.hpp"

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

}  // namespace

TEST_CASE("CSV parsing with and without headers") {
  const Dataset a = parse_csv("1,2\n3,4.5\n");
  CHECK(a.points.rows() == 2);
  CHECK(a.points(1, 1) == 4.5);
  CHECK(a.labels.empty());
  const Dataset b = parse_csv("x0,x1,label\n1,2,0\n3,4,1\n");
  CHECK(b.points.cols() == 2);
  CHECK(b.labels == std::vector<int>{0, 1});
  CsvOptions by_index;
  by_index.label_column = "0";
  const Dataset c = parse_csv("7,1.5\n8,2.5\n", by_index);
  CHECK(c.labels == std::vector<int>{7, 8});
  CHECK(c.points(1, 0) == 2.5);
  CsvOptions absent;
  absent.header = HeaderMode::Absent;
  CHECK(code_of([&] { parse_csv("a,b\n1,2\n", absent); }) == ErrorCode::ParseError);
}

TEST_CASE("CSV parse errors") {
  CHECK(code_of([] { parse_csv(""); }) == ErrorCode::EmptyFile);
  CHECK(code_of([] { parse_csv("x,y\n"); }) == ErrorCode::EmptyFile);
  CHECK(code_of([] { parse_csv("1,2\n3\n"); }) == ErrorCode::RaggedRows);
  CHECK(code_of([] { parse_csv("1,2\n3,abc\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_csv("1,2\n3,nan\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_csv("x,label\n1,0.5\n"); }) == ErrorCode::ParseError);
  try {
    parse_csv("1,2\n3,oops\n");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("row 2, column 2") != std::string::npos);
  }
  CHECK(code_of([] { ingest_csv("/nonexistent/file.csv"); }) == ErrorCode::Io);
}

TEST_CASE("CSV output roundtrips exactly") {
  Rng rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(20, 3);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = normal(rng) * std::pow(10.0, static_cast<double>(i % 7) - 3.0);
  std::vector<int> labels(20);
  for (int i = 0; i < 20; ++i) labels[static_cast<std::size_t>(i)] = i % 3;
  CsvOptions opts;
  opts.label_column = "3";
  const Dataset back = parse_csv(format_csv(m, labels), opts);
  CHECK(back.points == m);
  CHECK(back.labels == labels);
}

TEST_CASE("complex and measure JSON roundtrips") {
  const FuzzyComplex f = testing::figure1_monotone();
  const FuzzyComplex g = fuzzy_complex_from_json(nlohmann::json::parse(to_json(f).dump()));
  CHECK(g.vertex_count() == f.vertex_count());
  CHECK(g.maxdim() == f.maxdim());
  CHECK(g.weights() == f.weights());
  const ComplexMeasure m = figure4_measure();
  const ComplexMeasure back = complex_measure_from_json(nlohmann::json::parse(to_json(m).dump()));
  REQUIRE(back.support().size() == m.support().size());
  for (std::size_t i = 0; i < m.support().size(); ++i) {
    CHECK(back.support()[i].p == m.support()[i].p);
    CHECK(back.support()[i].complex.simplices() == m.support()[i].complex.simplices());
  }
  CHECK(code_of([] { fuzzy_complex_from_json(nlohmann::json::parse(R"({"vertices":2})")); }) == ErrorCode::ParseError);
  CHECK(code_of([] {
          fuzzy_complex_from_json(nlohmann::json::parse(R"({"vertices":2,"maxdim":1,"weights":[[[0],0.5,1]]})"));
        }) == ErrorCode::ParseError);
}

TEST_CASE("synthetic circle lies on the circle") {
  const Dataset c = synth(SynthKind::Circle, {{"n", 300}, {"r", 2.5}}, 9);
  REQUIRE(c.points.rows() == 300);
  for (Eigen::Index i = 0; i < c.points.rows(); ++i) CHECK(std::abs(c.points.row(i).norm() - 2.5) <= 1e-12);
  for (int l : c.labels) CHECK((l >= 0 && l < 10));
}

TEST_CASE("synthetic blobs are balanced and separated") {
  const Dataset b = synth(SynthKind::Blobs, {}, 1);
  REQUIRE(b.points.rows() == 500);
  CHECK(b.points.cols() == 10);
  int ones = 0;
  for (int l : b.labels) ones += l;
  CHECK(ones == 250);
  Eigen::VectorXd mean[2] = {Eigen::VectorXd::Zero(10), Eigen::VectorXd::Zero(10)};
  for (Eigen::Index i = 0; i < 500; ++i) mean[b.labels[static_cast<std::size_t>(i)]] += b.points.row(i).transpose() / 250.0;
  CHECK((mean[0] - mean[1]).norm() == doctest::Approx(10.0).epsilon(0.05));
  CHECK(mean[0](0) == doctest::Approx(-5.0).epsilon(0.05));
  const Dataset three = synth(SynthKind::Blobs, {{"c", 3}, {"n", 3000}, {"std", 0.01}}, 1);
  CHECK((three.points.row(0) - three.points.row(1)).norm() == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("synthetic datasets are deterministic and validated") {
  for (SynthKind kind : {SynthKind::Blobs, SynthKind::Circle, SynthKind::SwissLite}) {
    const Dataset a = synth(kind, {{"n", 50}}, 4);
    const Dataset b = synth(kind, {{"n", 50}}, 4);
    CHECK(a.points == b.points);
    CHECK(a.labels == b.labels);
    CHECK(synth(kind, {{"n", 50}}, 5).points != a.points);
  }
  CHECK(synth(SynthKind::SwissLite, {{"n", 10}}, 1).points.cols() == 3);
  CHECK(code_of([] { synth(SynthKind::Blobs, {{"q", 1}}, 0); }) == ErrorCode::BadParams);
  CHECK(code_of([] { synth(SynthKind::Blobs, {{"n", 2.5}}, 0); }) == ErrorCode::BadParams);
  CHECK(code_of([] { synth(SynthKind::Blobs, {{"c", 11}}, 0); }) == ErrorCode::BadParams);
  CHECK(code_of([] { synth(SynthKind::Circle, {{"noise", -1}}, 0); }) == ErrorCode::BadParams);
  CHECK(code_of([] { parse_synth_kind("moons"); }) == ErrorCode::BadParams);
  CHECK(code_of([] { parse_synth_params("n=abc"); }) == ErrorCode::BadParams);
  CHECK(parse_synth_params("n=5,sep=2.5") == SynthParams{{"n", 5}, {"sep", 2.5}});
}

TEST_CASE("SVG scatter output") {
  Eigen::MatrixXd y(3, 2);
  y << 0, 0, 1, 2, 2, 1;
  const std::string svg = render_svg(y, {0, 1, 12}, {100, 50, 1.0, "a<b"});
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<title>a&lt;b</title>") != std::string::npos);
  CHECK(svg.find("cx=\"5.000\" cy=\"47.500\"") != std::string::npos);
  CHECK(svg.find("cx=\"50.000\" cy=\"2.500\"") != std::string::npos);
  CHECK(svg.find(svg_palette()[2]) != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(code_of([] { render_svg(Eigen::MatrixXd::Zero(3, 1), {}); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([&] { render_svg(y, {0}); }) == ErrorCode::ShapeMismatch);
}
