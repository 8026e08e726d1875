#include "fuzzydr/poset.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace fuzzydr {

FinitePoset FinitePoset::validate(const std::vector<std::vector<bool>>& leq) {
  const std::size_t n = leq.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (leq[i].size() != n) {
      throw Error(ErrorCode::ShapeMismatch, "relation table row " + std::to_string(i) + " is not of length " +
                                                std::to_string(n));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!leq[i][i]) {
      throw Error(ErrorCode::ReflexivityViolation, "element " + std::to_string(i) + " is not <= itself");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (leq[i][j] && leq[j][i]) {
        throw Error(ErrorCode::AntisymmetryViolation,
                    "pair (" + std::to_string(i) + ", " + std::to_string(j) + ") related both ways");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!leq[i][j]) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (leq[j][k] && !leq[i][k]) {
          throw Error(ErrorCode::TransitivityViolation, "triple (" + std::to_string(i) + ", " + std::to_string(j) +
                                                            ", " + std::to_string(k) + ") breaks transitivity");
        }
      }
    }
  }

  FinitePoset p;
  p.n_ = n;
  p.table_.assign(n * n, 0);
  std::vector<std::size_t> below(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (leq[i][j]) {
        p.table_[i * n + j] = 1;
        ++below[j];
      }
    }
  }
  // x < y implies Down(x) is a proper subset of Down(y), so sorting by
  // down-set size yields a linear extension.
  p.order_.resize(n);
  std::iota(p.order_.begin(), p.order_.end(), std::size_t{0});
  std::stable_sort(p.order_.begin(), p.order_.end(),
                   [&](std::size_t a, std::size_t b) { return below[a] < below[b]; });
  return p;
}

FinitePoset FinitePoset::antichain(std::size_t n) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) leq[i][i] = true;
  return validate(leq);
}

FinitePoset FinitePoset::chain(std::size_t n) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) leq[i][j] = true;
  }
  return validate(leq);
}

namespace {

void extend_down_sets(const FinitePoset& poset, std::size_t pos, std::vector<bool>& current,
                      std::vector<DownSet>& out) {
  const auto& order = poset.linear_extension();
  if (pos == order.size()) {
    out.push_back(DownSet{current});
    return;
  }
  const std::size_t x = order[pos];
  extend_down_sets(poset, pos + 1, current, out);

  // x may join only if everything strictly below it is already present;
  // those elements precede x in the linear extension.
  bool admissible = true;
  for (std::size_t y = 0; y < poset.size() && admissible; ++y) {
    if (poset.less(y, x) && !current[y]) admissible = false;
  }
  if (admissible) {
    current[x] = true;
    extend_down_sets(poset, pos + 1, current, out);
    current[x] = false;
  }
}

}  // namespace

std::vector<DownSet> enumerate_down_sets(const FinitePoset& poset, std::size_t cap) {
  if (poset.size() > cap) {
    throw Error(ErrorCode::CapExceeded, "poset has " + std::to_string(poset.size()) +
                                            " elements; down-set enumeration is capped at " + std::to_string(cap));
  }
  std::vector<DownSet> out;
  std::vector<bool> current(poset.size(), false);
  extend_down_sets(poset, 0, current, out);
  return out;
}

MoebiusTable moebius(const FinitePoset& poset) {
  const std::size_t n = poset.size();
  MoebiusTable mu(n);
  const auto& order = poset.linear_extension();
  for (std::size_t c = 0; c < n; ++c) {
    mu.at(c, c) = 1;
    // Visiting d in linear-extension order guarantees every b in [c, d) is done.
    for (std::size_t d : order) {
      if (!poset.less(c, d)) continue;
      std::int64_t sum = 0;
      for (std::size_t b = 0; b < n; ++b) {
        if (poset.leq(c, b) && poset.less(b, d)) sum += mu(c, b);
      }
      mu.at(c, d) = -sum;
    }
  }
  return mu;
}

}  // namespace fuzzydr
