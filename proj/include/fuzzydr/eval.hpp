#pragma once

// Embedding quality metrics: trustworthiness, the Procrustes global score,
// Vietoris-Rips persistence in degrees 0 and 1, and the 2-Wasserstein
// distance between persistence diagrams.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fuzzydr/filtrations.hpp"

namespace fuzzydr {

/// T(k) with exact ranks (ties by index). Throws KTooLarge unless
/// 0 < k < n / 2 and ShapeMismatch for different point counts.
double trustworthiness(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int k);

/// 1 - min_R |Y - Ypca R|_F / |Ypca|_F over orthogonal R, after centring both.
/// Throws ZeroNorm and ShapeMismatch.
double procrustes_global(const Eigen::MatrixXd& y, const Eigen::MatrixXd& ypca);

struct PersistencePair {
  double birth;
  double death;
  bool essential = false;  ///< class still alive at the scale cap; death holds the cap

  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
  int degree = 0;
  std::vector<PersistencePair> pairs;  ///< sorted by birth, then death
};

inline constexpr std::size_t kMaxPersistencePoints = 400;

/// min over centres c of max_j d(c, j). Above this scale the VR complex is a
/// cone, so no class of any degree is born or dies beyond it.
double enclosing_radius(const DistanceMatrix& d);

/// Diagrams for degrees 0..max_degree (at most 1). The cap defaults to the
/// enclosing radius. Zero-length H0 pairs are kept, zero-length H1 pairs
/// dropped. Throws CapExceeded above kMaxPersistencePoints points.
std::vector<PersistenceDiagram> vr_persistence(const DistanceMatrix& d, int max_degree = 1,
                                               std::optional<double> scale_cap = std::nullopt);

/// Square root of the optimal squared-Euclidean matching cost, with the
/// diagonal available to both sides. Essential pairs are ignored. Throws
/// DegreeMismatch.
double wasserstein2(const PersistenceDiagram& a, const PersistenceDiagram& b);

/// Minimum-cost perfect matching on a square cost matrix; returns the column
/// assigned to each row.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

struct EvalConfig {
  int k = 15;
  int subsample = 200;
  int repeats = 30;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct MetricReport {
  double trustworthiness = 0.0;
  double procrustesG = 0.0;
  double wassersteinH0 = 0.0;
  double wassersteinH1 = 0.0;
  int k = 0;
  int subsample = 0;
  int repeats = 0;
  std::uint64_t seed = 0;
};

/// Trustworthiness and G on the full data; Wasserstein distances averaged
/// over `repeats` subsamples drawn with the same indices for X and Y.
MetricReport evaluate(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const EvalConfig& config);

}  // namespace fuzzydr
