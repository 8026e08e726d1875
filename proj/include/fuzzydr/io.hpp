#pragma once

// File formats: numeric CSV in and out, and JSON for complexes and measures.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fuzzydr/embed.hpp"
#include "fuzzydr/measures.hpp"
#include "fuzzydr/simplicial.hpp"

namespace fuzzydr {

enum class HeaderMode { Auto, Present, Absent };

struct CsvOptions {
  HeaderMode header = HeaderMode::Auto;
  /// Column holding integer labels: a header name or a zero-based index.
  /// A column named "label" is used when this is unset and a header exists.
  std::optional<std::string> label_column;
};

/// Throws EmptyFile, RaggedRows, ParseError (with row and column) and Io.
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});
Dataset ingest_csv(const std::string& path, const CsvOptions& options = {});

/// One row per point, full round-trip precision, optional trailing label.
std::string format_csv(const Eigen::MatrixXd& m, const std::vector<int>& labels = {});
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

nlohmann::json to_json(const SimplexKey& s);
nlohmann::json to_json(const FuzzyComplex& f);
nlohmann::json to_json(const ComplexMeasure& m);

/// Throw ParseError on malformed documents and the usual validation errors
/// on invalid content.
FuzzyComplex fuzzy_complex_from_json(const nlohmann::json& j);
ComplexMeasure complex_measure_from_json(const nlohmann::json& j);

}  // namespace fuzzydr
