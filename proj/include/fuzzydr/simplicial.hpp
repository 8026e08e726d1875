#pragma once

// Truncated simplicial sets over a finite vertex set, crisp and fuzzy.
//
// Simplices are unordered vertex subsets: one nondegenerate representative per
// degeneracy class. Degenerate simplices are never materialized; their weight
// always equals the weight of their nondegenerate base.

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "fuzzydr/poset.hpp"

namespace fuzzydr {

inline constexpr int kDefaultMaxDim = 2;

class SimplexKey {
 public:
  SimplexKey() = default;
  /// Sorts the vertices; throws InvalidSimplex on an empty list, a repeated
  /// vertex, or a negative id.
  explicit SimplexKey(std::vector<int> vertices);
  SimplexKey(std::initializer_list<int> vertices) : SimplexKey(std::vector<int>(vertices)) {}

  std::span<const int> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  int dim() const noexcept { return static_cast<int>(vertices_.size()) - 1; }
  int operator[](std::size_t i) const { return vertices_[i]; }

  /// True when this simplex's vertex set is a subset of `other`'s.
  bool is_face_of(const SimplexKey& other) const;

  /// Ordered by dimension first, then lexicographically.
  friend std::strong_ordering operator<=>(const SimplexKey& a, const SimplexKey& b);
  friend bool operator==(const SimplexKey& a, const SimplexKey& b) = default;

 private:
  std::vector<int> vertices_;
};

/// Codimension-one faces in face-map order: the k-th entry drops vertex k.
/// Throws DimensionZero for a vertex.
std::vector<SimplexKey> faces(const SimplexKey& sigma);

/// Every nonempty subset of sigma's vertices, sigma included.
std::vector<SimplexKey> all_faces(const SimplexKey& sigma);

/// All simplices on `vertex_count` vertices up to dimension `maxdim`,
/// ordered by dimension then lexicographically.
std::vector<SimplexKey> all_simplices(int vertex_count, int maxdim);

/// Face-closed set of simplices.
class CrispComplex {
 public:
  CrispComplex(int vertex_count, int maxdim);
  /// Throws NotFaceClosed if some face of a listed simplex is missing and
  /// InvalidSimplex for simplices outside the shape.
  CrispComplex(int vertex_count, int maxdim, std::set<SimplexKey> present);

  /// Adds every face of each listed simplex.
  static CrispComplex closure(int vertex_count, int maxdim, const std::vector<SimplexKey>& generators);

  int vertex_count() const noexcept { return vertex_count_; }
  int maxdim() const noexcept { return maxdim_; }
  const std::set<SimplexKey>& simplices() const noexcept { return present_; }
  bool contains(const SimplexKey& s) const { return present_.contains(s); }
  std::size_t size() const noexcept { return present_.size(); }

  friend bool operator==(const CrispComplex&, const CrispComplex&) = default;
  friend auto operator<=>(const CrispComplex& a, const CrispComplex& b) {
    if (auto c = a.vertex_count_ <=> b.vertex_count_; c != 0) return c;
    if (auto c = a.maxdim_ <=> b.maxdim_; c != 0) return c;
    return a.present_ <=> b.present_;
  }

 private:
  int vertex_count_;
  int maxdim_;
  std::set<SimplexKey> present_;
};

/// Minimal complex containing sigma: sigma and all of its faces.
CrispComplex minimal_complex(const SimplexKey& sigma, int vertex_count, int maxdim = kDefaultMaxDim);

/// Checks a simplex fits a (vertex_count, maxdim) shape; throws InvalidSimplex.
void require_in_shape(const SimplexKey& s, int vertex_count, int maxdim);

/// Fuzzy weights on simplices; absent keys weigh zero.
class FuzzyComplex {
 public:
  FuzzyComplex(int vertex_count, int maxdim);

  static FuzzyComplex indicator(const CrispComplex& complex);

  int vertex_count() const noexcept { return vertex_count_; }
  int maxdim() const noexcept { return maxdim_; }

  double weight(const SimplexKey& s) const;
  /// Throws InvalidSimplex outside the shape and BadParams for weights
  /// outside [0, 1].
  void set(const SimplexKey& s, double w);

  /// Stored entries, including explicit zeros.
  const std::map<SimplexKey, double>& weights() const noexcept { return weights_; }

  bool same_shape(const FuzzyComplex& other) const noexcept {
    return vertex_count_ == other.vertex_count_ && maxdim_ == other.maxdim_;
  }

 private:
  int vertex_count_;
  int maxdim_;
  std::map<SimplexKey, double> weights_;
};

struct MonotonicityReport {
  /// (face, coface) pairs where the face weighs less than the coface.
  std::vector<std::pair<SimplexKey, SimplexKey>> violations;
  bool ok() const noexcept { return violations.empty(); }
};

MonotonicityReport check_monotone(const FuzzyComplex& f, double tolerance = 1e-12);

/// Fuzzy intersection/union operators: the t-norms Min and Product and their
/// dual t-conorms Max and ProbabilisticSum.
enum class FuzzyOp { Min, Product, Max, ProbabilisticSum };

double apply(FuzzyOp op, double a, double b) noexcept;
FuzzyOp dual(FuzzyOp op) noexcept;
bool is_tnorm(FuzzyOp op) noexcept;

/// Pointwise merge; throws ShapeMismatch.
FuzzyComplex merge(const FuzzyComplex& a, const FuzzyComplex& b, FuzzyOp op);

/// The face poset of a shape, with simplices indexed as in `simplices`.
/// `reversed` flips the order so that cofaces sit below their faces.
struct FacePoset {
  std::vector<SimplexKey> simplices;
  FinitePoset poset;
  std::map<SimplexKey, std::size_t> index;
};

FacePoset face_poset(int vertex_count, int maxdim, bool reversed = false);

}  // namespace fuzzydr
