#pragma once

// Vietoris-Rips, Cech and curvature filtrations over finite metric spaces,
// together with the random-scale measures they induce.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fuzzydr/measures.hpp"
#include "fuzzydr/scale_dist.hpp"
#include "fuzzydr/simplicial.hpp"

namespace fuzzydr {

/// Symmetric matrix of pairwise distances with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Throws InvalidDistanceMatrix for ragged, asymmetric (beyond 1e-12),
  /// negative, non-finite or nonzero-diagonal input.
  explicit DistanceMatrix(const std::vector<std::vector<double>>& rows);

  /// Euclidean distances between the rows of a row-major n x dim array.
  static DistanceMatrix from_points(std::span<const double> data, std::size_t n, std::size_t dim);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }

  /// Throws TriangleInequalityViolation naming the first violating triple.
  void check_triangle_inequality(double tolerance = 1e-12) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

enum class FiltrationKind { VR, CechExtrinsic, CechIntrinsic };

/// Simplex diameter; 0 for vertices.
double vr_scale(const SimplexKey& sigma, const DistanceMatrix& d);

/// {sigma : vr_scale(sigma) <= r} up to `maxdim`.
CrispComplex vr_complex(const DistanceMatrix& d, double r, int maxdim);

/// Radius of the smallest ball enclosing a triangle with the given side
/// lengths: half the longest side when the triangle is right, obtuse or
/// collinear, the circumradius otherwise. Throws TriangleInequalityViolation
/// and NegativeScale.
double cech3_radius(double dij, double djk, double dki);

/// Partial derivatives of cech3_radius with respect to its three arguments.
/// On the boundary between branches the half-longest-side branch is used.
std::array<double, 3> cech3_radius_gradient(double dij, double djk, double dki);

/// Cech radius of a simplex with at most three vertices.
double cech_extrinsic_scale(const SimplexKey& sigma, const DistanceMatrix& d);

/// softmax_tau(x) = tau log sum exp(x / tau), computed stably.
double soft_max(std::span<const double> x, double tau);
/// softmin_tau(x) = -tau log sum exp(-x / tau).
double soft_min(std::span<const double> x, double tau);

/// min over candidates y of max over vertices v of d(v, y); with `tau` set,
/// the min and max are replaced by their log-sum-exp relaxations.
double intrinsic_cech_radius(const SimplexKey& sigma, const DistanceMatrix& d, std::span<const int> candidates,
                             std::optional<double> tau = std::nullopt);

/// Appearance scale of sigma in the given filtration. CechIntrinsic uses every
/// point as a candidate centre (hard min/max).
double appearance_scale(const SimplexKey& sigma, const DistanceMatrix& d, FiltrationKind kind);

/// Every simplex up to `maxdim` with its appearance scale, sorted by scale and
/// then by simplex.
std::vector<std::pair<SimplexKey, double>> filtration_values(const DistanceMatrix& d, int maxdim, FiltrationKind kind);

inline constexpr std::size_t kMaxFiltrationMeasurePoints = 6;

/// Measure of the filtration complex at a random scale r ~ cdf: one complex
/// per distinct appearance scale. Throws CapExceeded for more than six points
/// and BadParams for extrinsic Cech above dimension two.
ComplexMeasure filtration_measure(const DistanceMatrix& d, const ScaleDistribution& cdf, int maxdim,
                                  FiltrationKind kind);

/// weight(sigma) = survival(appearance scale).
FuzzyComplex fuzzy_from_filtration(const DistanceMatrix& d, const ScaleDistribution& cdf, int maxdim,
                                   FiltrationKind kind);

/// Random-scale measure of the Boolean combination of two VR filtrations
/// taken at the same scale, i.e. merged before averaging over scales.
ComplexMeasure merged_filtration_measure(const DistanceMatrix& d1, const DistanceMatrix& d2,
                                         const ScaleDistribution& cdf, int maxdim, BoolOp op);

struct GromovProducts {
  double r1;
  double r2;
  double r3;
};

/// r1 = (dij + dik - djk) / 2 and cyclically, so that r_a + r_b = d(a, b).
GromovProducts gromov_products(int i, int j, int k, const DistanceMatrix& d);

/// min over candidates x of max_k d(x_k, x) / r_k. Throws
/// DegenerateGromovProduct when some r_k is not positive.
double curvature_rho3(int i, int j, int k, const DistanceMatrix& d, std::span<const int> candidates);

/// Curvature complex: vertices weigh 1, edges survival(1), triangles
/// survival(rho) clipped to their smallest edge weight.
FuzzyComplex curvature_weights(const DistanceMatrix& d, const ScaleDistribution& cdf, std::span<const int> candidates);

}  // namespace fuzzydr
