#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fuzzydr/error.hpp"
#include "fuzzydr/io.hpp"

namespace fuzzydr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> to_number(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::string location(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row + 1) + ", column " + std::to_string(col + 1);
}

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_row(line));
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyFile, "no rows in input");

  bool header = options.header == HeaderMode::Present;
  if (options.header == HeaderMode::Auto) {
    header = std::any_of(rows.front().begin(), rows.front().end(),
                         [](const std::string& c) { return !to_number(c).has_value(); });
  }
  std::vector<std::string> names;
  std::size_t first = 0;
  if (header) {
    names = rows.front();
    first = 1;
  }
  const std::size_t width = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw Error(ErrorCode::RaggedRows, "row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                                             " cells, expected " + std::to_string(width));
    }
  }
  if (rows.size() == first) throw Error(ErrorCode::EmptyFile, "header without data rows");

  std::optional<std::size_t> label;
  if (options.label_column) {
    const std::string& key = *options.label_column;
    auto it = std::find(names.begin(), names.end(), key);
    if (it != names.end()) {
      label = static_cast<std::size_t>(it - names.begin());
    } else if (auto idx = to_number(key); idx && *idx >= 0 && *idx < static_cast<double>(width) &&
                                         *idx == static_cast<double>(static_cast<std::size_t>(*idx))) {
      label = static_cast<std::size_t>(*idx);
    } else {
      throw Error(ErrorCode::ParseError, "label column '" + key + "' not found");
    }
  } else if (auto it = std::find(names.begin(), names.end(), "label"); it != names.end()) {
    label = static_cast<std::size_t>(it - names.begin());
  }

  const std::size_t n = rows.size() - first;
  const std::size_t d = width - (label ? 1 : 0);
  if (d == 0) throw Error(ErrorCode::EmptyFile, "no numeric feature columns");
  Dataset out;
  out.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  if (label) out.labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t c_out = 0;
    for (std::size_t c = 0; c < width; ++c) {
      const std::string& cell = rows[r + first][c];
      const auto v = to_number(cell);
      if (!v || !std::isfinite(*v)) {
        throw Error(ErrorCode::ParseError, "'" + cell + "' is not a finite number at " + location(r + first, c));
      }
      if (label && c == *label) {
        if (*v != static_cast<double>(static_cast<int>(*v))) {
          throw Error(ErrorCode::ParseError, "label is not an integer at " + location(r + first, c));
        }
        out.labels[r] = static_cast<int>(*v);
      } else {
        out.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c_out++)) = *v;
      }
    }
  }
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write to " + path + " failed");
}

Dataset ingest_csv(const std::string& path, const CsvOptions& options) { return parse_csv(read_text(path), options); }

std::string format_csv(const Eigen::MatrixXd& m, const std::vector<int>& labels) {
  std::string out;
  char buf[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, m(r, c));
      out.append(buf, ptr);
    }
    if (!labels.empty()) out += ',' + std::to_string(labels[static_cast<std::size_t>(r)]);
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const SimplexKey& s) { return std::vector<int>(s.vertices().begin(), s.vertices().end()); }

nlohmann::json to_json(const FuzzyComplex& f) {
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& [s, w] : f.weights()) weights.push_back(nlohmann::json::array({to_json(s), w}));
  return {{"vertices", f.vertex_count()}, {"maxdim", f.maxdim()}, {"weights", weights}};
}

nlohmann::json to_json(const ComplexMeasure& m) {
  nlohmann::json complexes = nlohmann::json::array();
  for (const auto& e : m.support()) {
    nlohmann::json simplices = nlohmann::json::array();
    for (const auto& s : e.complex.simplices()) simplices.push_back(to_json(s));
    complexes.push_back({{"simplices", simplices}, {"p", e.p}});
  }
  return {{"vertices", m.vertex_count()}, {"maxdim", m.maxdim()}, {"complexes", complexes}};
}

FuzzyComplex fuzzy_complex_from_json(const nlohmann::json& j) {
  try {
    FuzzyComplex f(j.at("vertices").get<int>(), j.at("maxdim").get<int>());
    for (const auto& item : j.at("weights")) {
      if (!item.is_array() || item.size() != 2) throw Error(ErrorCode::ParseError, "weight entries are [simplex, w] pairs");
      f.set(SimplexKey(item.at(0).get<std::vector<int>>()), item.at(1).get<double>());
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("fuzzy complex JSON: ") + e.what());
  }
}

ComplexMeasure complex_measure_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("vertices").get<int>();
    const int maxdim = j.at("maxdim").get<int>();
    std::vector<ComplexMeasure::Entry> support;
    for (const auto& item : j.at("complexes")) {
      std::set<SimplexKey> present;
      for (const auto& s : item.at("simplices")) present.insert(SimplexKey(s.get<std::vector<int>>()));
      support.push_back({CrispComplex(n, maxdim, std::move(present)), item.at("p").get<double>()});
    }
    return ComplexMeasure(n, maxdim, std::move(support));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("measure JSON: ") + e.what());
  }
}

}  // namespace fuzzydr
