#pragma once

// Probability measures over crisp complexes and over simplices, the marginal
// map to fuzzy complexes, its constructive preimage, Boolean merging, and the
// divergences that compare such measures.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "fuzzydr/scale_dist.hpp"
#include "fuzzydr/simplicial.hpp"

namespace fuzzydr {

/// Explicit probability table over crisp complexes of one shape.
class ComplexMeasure {
 public:
  struct Entry {
    CrispComplex complex;
    double p;
  };

  /// Throws InvalidMeasure for negative or non-normalized probabilities,
  /// duplicate complexes, or an empty support; ShapeMismatch for mixed shapes.
  ComplexMeasure(int vertex_count, int maxdim, std::vector<Entry> support);

  static ComplexMeasure delta(const CrispComplex& complex);

  int vertex_count() const noexcept { return vertex_count_; }
  int maxdim() const noexcept { return maxdim_; }
  const std::vector<Entry>& support() const noexcept { return support_; }

  /// Probability of one complex; zero when it is not in the support.
  double probability(const CrispComplex& complex) const;

 private:
  int vertex_count_;
  int maxdim_;
  std::vector<Entry> support_;
};

/// Probability table over simplices.
class SimplexMeasure {
 public:
  SimplexMeasure(int vertex_count, int maxdim, std::map<SimplexKey, double> probs);

  int vertex_count() const noexcept { return vertex_count_; }
  int maxdim() const noexcept { return maxdim_; }
  const std::map<SimplexKey, double>& probabilities() const noexcept { return probs_; }
  double probability(const SimplexKey& s) const;

 private:
  int vertex_count_;
  int maxdim_;
  std::map<SimplexKey, double> probs_;
};

/// 1-skeleton measure where vertices are always present and each edge is an
/// independent coin. Unlisted edges have probability zero.
struct EdgeIndependentMeasure {
  int vertex_count = 0;
  std::map<SimplexKey, double> edge_prob;
};

inline constexpr std::size_t kMaxEnumeratedEdges = 15;

/// weight(s) = probability that s is present in a sampled complex.
FuzzyComplex marginal(const ComplexMeasure& m);

/// Level-set decomposition: one threshold complex per distinct positive
/// weight, plus the empty complex carrying 1 - max weight. Throws
/// NonMonotoneInput.
ComplexMeasure level_set_preimage(const FuzzyComplex& f);

/// weight(s) = total mass on simplices containing s.
FuzzyComplex cdm_marginal(const SimplexMeasure& q);

/// Moebius inversion over the face poset. Throws NoPreimage when the
/// inverted function is not a probability distribution.
SimplexMeasure cdm_invert(const FuzzyComplex& f);

enum class BoolOp { Or, And };

/// Pushforward of p1 x p2 under elementwise OR / AND of indicators.
ComplexMeasure boolean_merge(const ComplexMeasure& p1, const ComplexMeasure& p2, BoolOp op);

/// sum p ln(p / q) with 0 ln 0 = 0; +inf when p charges a complex q does not.
double kl_divergence(const ComplexMeasure& p, const ComplexMeasure& q);

/// Lower clamp for the second argument of the cross entropy.
inline constexpr double kCrossEntropyEps = 1e-12;

/// Fuzzy cross entropy summed over dimensions with weights `dim_weights`
/// (empty means weight 1 for every dimension). The second argument is clamped
/// to [eps, 1 - eps] only where the first lies strictly inside (0, 1); crisp
/// disagreements return +inf.
double fuzzy_cross_entropy(const FuzzyComplex& a, const FuzzyComplex& b, const std::vector<double>& dim_weights = {});

/// Per-simplex cross entropy term, exposed for the loss functions.
double cross_entropy_term(double mu, double nu, double eps = kCrossEntropyEps);

/// Explicit product measure; throws CapExceeded past kMaxEnumeratedEdges.
ComplexMeasure independent_edge_measure(const EdgeIndependentMeasure& e);

struct CeKlReport {
  double cross_entropy;
  double kl;
  double gap;
};

/// Compares CE of the marginals against KL of the measures.
CeKlReport ce_kl_gap(const ComplexMeasure& p, const ComplexMeasure& q);
CeKlReport verify_ce_equals_kl(const EdgeIndependentMeasure& e1, const EdgeIndependentMeasure& e2);

/// Measure generated by visiting simplices in dimension order and keeping
/// each one with probability `conditional[s]` when all its faces are present
/// (absent keys mean probability zero). Locally Markov by construction.
ComplexMeasure locally_markov_measure(int vertex_count, int maxdim, const std::map<SimplexKey, double>& conditional);

/// Empty string when p is a Bayesian network over the face DAG (parents are
/// the codimension-one faces); otherwise names the failing conditional
/// independence. Throws CapExceeded past 63 simplices.
std::string locally_markov_violation(const ComplexMeasure& p, double tolerance = 1e-9);

/// KL divergence through the face-DAG factorization. Throws NotLocallyMarkov.
double locally_markov_kl(const ComplexMeasure& p, const ComplexMeasure& q);

/// Edges of a random-scale VR model sorted by distance, with the CDF value at
/// each distance.
struct RankOrderChain {
  struct Link {
    SimplexKey edge;
    double distance;
    double phi;
  };
  std::vector<Link> links;

  /// Sorts edges by distance (ties by key); throws NegativeScale.
  static RankOrderChain build(std::vector<std::pair<SimplexKey, double>> edges, const ScaleDistribution& dist);
};

/// Joint probability of an edge presence pattern (indexed along the chain).
double rank_order_joint(const RankOrderChain& chain, const std::vector<bool>& present);

/// Same probability through p(s_0) prod p(s_k | s_{k-1}).
double rank_order_chain_factorization(const RankOrderChain& chain, const std::vector<bool>& present);

}  // namespace fuzzydr
