#pragma once

// Finite partially ordered sets: validation, down-set enumeration, and the
// zeta / Moebius transform pair.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fuzzydr/error.hpp"

namespace fuzzydr {

/// A finite poset stored as a dense relation table. Construct through
/// `FinitePoset::validate`, which checks the three order axioms.
class FinitePoset {
 public:
  FinitePoset() = default;

  /// leq[i][j] means element i <= element j. Throws Error with
  /// ReflexivityViolation, AntisymmetryViolation or TransitivityViolation
  /// naming the offending pair or triple.
  static FinitePoset validate(const std::vector<std::vector<bool>>& leq);

  static FinitePoset antichain(std::size_t n);
  static FinitePoset chain(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool leq(std::size_t i, std::size_t j) const noexcept { return table_[i * n_ + j] != 0; }
  bool less(std::size_t i, std::size_t j) const noexcept { return i != j && leq(i, j); }

  /// Elements ordered so that every element appears after everything below it.
  const std::vector<std::size_t>& linear_extension() const noexcept { return order_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> table_;
  std::vector<std::size_t> order_;
};

struct DownSet {
  std::vector<bool> members;

  bool contains(std::size_t i) const { return members[i]; }
  friend bool operator==(const DownSet&, const DownSet&) = default;
};

inline constexpr std::size_t kDownSetCap = 20;

/// All downward-closed subsets, each exactly once. Throws CapExceeded when the
/// poset has more than `cap` elements.
std::vector<DownSet> enumerate_down_sets(const FinitePoset& poset, std::size_t cap = kDownSetCap);

/// Moebius function of a poset, exact integers. Entries for incomparable
/// pairs are zero.
class MoebiusTable {
 public:
  MoebiusTable() = default;
  explicit MoebiusTable(std::size_t n) : n_(n), m_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  std::int64_t operator()(std::size_t c, std::size_t d) const noexcept { return m_[c * n_ + d]; }
  std::int64_t& at(std::size_t c, std::size_t d) noexcept { return m_[c * n_ + d]; }

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> m_;
};

MoebiusTable moebius(const FinitePoset& poset);

/// g(c) = sum over c' <= c of q(c').
template <typename T>
std::vector<T> zeta_transform(const FinitePoset& poset, std::span<const T> q) {
  if (q.size() != poset.size()) {
    throw Error(ErrorCode::ShapeMismatch, "zeta_transform: function size differs from poset size");
  }
  std::vector<T> g(q.size(), T{});
  for (std::size_t c = 0; c < poset.size(); ++c) {
    for (std::size_t b = 0; b < poset.size(); ++b) {
      if (poset.leq(b, c)) g[c] += q[b];
    }
  }
  return g;
}

/// f(c) = sum over c' <= c of g(c') m(c', c); inverts zeta_transform.
template <typename T>
std::vector<T> moebius_invert(const FinitePoset& poset, const MoebiusTable& mu, std::span<const T> g) {
  if (g.size() != poset.size() || mu.size() != poset.size()) {
    throw Error(ErrorCode::ShapeMismatch, "moebius_invert: size mismatch");
  }
  std::vector<T> f(g.size(), T{});
  for (std::size_t c = 0; c < poset.size(); ++c) {
    for (std::size_t b = 0; b < poset.size(); ++b) {
      if (poset.leq(b, c)) f[c] += g[b] * static_cast<T>(mu(b, c));
    }
  }
  return f;
}

}  // namespace fuzzydr
