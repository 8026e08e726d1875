#pragma once

// Exact verification suite: each law enumerates or samples small instances and
// checks an identity of the measure calculus, reporting a counterexample on
// failure.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzydr/embed.hpp"
#include "fuzzydr/filtrations.hpp"
#include "fuzzydr/measures.hpp"
#include "fuzzydr/simplicial.hpp"

namespace fuzzydr {

struct LawResult {
  std::string law;
  bool passed = false;
  std::size_t cases = 0;
  /// Largest deviation seen, or the reported quantity for single instances.
  double max_error = 0.0;
  std::string detail;
};

/// Names accepted by run_law, in default execution order.
const std::vector<std::string>& law_names();

/// Throws BadParams for an unknown name.
LawResult run_law(const std::string& name, std::uint64_t seed);
std::vector<LawResult> run_all_laws(std::uint64_t seed);

LawResult law_marginal_roundtrip(std::uint64_t seed, int count = 200);
LawResult law_moebius_roundtrip(std::uint64_t seed, int count = 100);
LawResult law_cdm_nonsurjective();
LawResult law_merge(std::uint64_t seed, int random_pairs = 50);
LawResult law_order_of_operations();
LawResult law_ce_kl(std::uint64_t seed, int count = 100);
LawResult law_ce_kl_dependent();
LawResult law_filtration_marginal(std::uint64_t seed, int count = 50);
LawResult law_rank_order(std::uint64_t seed, int count = 50);
LawResult law_figure4();

/// The four-complex measure on six vertices with probabilities 2/8, 3/8, 2/8, 1/8.
ComplexMeasure figure4_measure();

/// Random monotone weights: vertices uniform, each coface a random fraction of
/// its weakest face, with occasional zeros and repeated levels.
FuzzyComplex random_monotone_complex(Rng& rng, int vertex_count, int maxdim);

/// Random probability table over a random nonempty subset of simplices.
SimplexMeasure random_simplex_measure(Rng& rng, int vertex_count, int maxdim);

/// Random measure over every crisp complex of the shape (enumerated as down-sets).
ComplexMeasure random_complex_measure(Rng& rng, int vertex_count, int maxdim);

/// Every crisp complex of the shape, the empty one included.
std::vector<CrispComplex> all_complexes(int vertex_count, int maxdim);

/// Distances between uniform random points in the unit square.
DistanceMatrix random_planar_metric(Rng& rng, int n);

/// "PASS name (cases, max error)" lines, with the detail on failures.
std::string format_law_report(const std::vector<LawResult>& results);
nlohmann::json to_json(const std::vector<LawResult>& results);

}  // namespace fuzzydr
