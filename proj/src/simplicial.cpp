#include "fuzzydr/simplicial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace fuzzydr {

namespace {

std::string describe(const SimplexKey& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ']';
  return os.str();
}

void subsets_of_size(std::span<const int> verts, std::size_t k, std::size_t start, std::vector<int>& cur,
                     std::vector<SimplexKey>& out) {
  if (cur.size() == k) {
    out.emplace_back(cur);
    return;
  }
  for (std::size_t i = start; i < verts.size(); ++i) {
    cur.push_back(verts[i]);
    subsets_of_size(verts, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

SimplexKey::SimplexKey(std::vector<int> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw Error(ErrorCode::InvalidSimplex, "simplex needs at least one vertex");
  std::sort(vertices_.begin(), vertices_.end());
  if (vertices_.front() < 0) throw Error(ErrorCode::InvalidSimplex, "negative vertex id");
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
    throw Error(ErrorCode::InvalidSimplex, "repeated vertex in " + describe(*this));
  }
}

bool SimplexKey::is_face_of(const SimplexKey& other) const {
  return std::includes(other.vertices_.begin(), other.vertices_.end(), vertices_.begin(), vertices_.end());
}

std::strong_ordering operator<=>(const SimplexKey& a, const SimplexKey& b) {
  if (auto c = a.vertices_.size() <=> b.vertices_.size(); c != 0) return c;
  return a.vertices_ <=> b.vertices_;
}

std::vector<SimplexKey> faces(const SimplexKey& sigma) {
  if (sigma.size() < 2) throw Error(ErrorCode::DimensionZero, "a vertex has no faces");
  std::vector<SimplexKey> out;
  out.reserve(sigma.size());
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    std::vector<int> v;
    v.reserve(sigma.size() - 1);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      if (i != k) v.push_back(sigma[i]);
    }
    out.emplace_back(std::move(v));
  }
  return out;
}

std::vector<SimplexKey> all_faces(const SimplexKey& sigma) {
  std::vector<SimplexKey> out;
  std::vector<int> cur;
  for (std::size_t k = 1; k <= sigma.size(); ++k) subsets_of_size(sigma.vertices(), k, 0, cur, out);
  return out;
}

std::vector<SimplexKey> all_simplices(int vertex_count, int maxdim) {
  std::vector<int> verts(static_cast<std::size_t>(std::max(vertex_count, 0)));
  for (int i = 0; i < vertex_count; ++i) verts[static_cast<std::size_t>(i)] = i;
  std::vector<SimplexKey> out;
  std::vector<int> cur;
  for (int d = 0; d <= maxdim && d < vertex_count; ++d) {
    subsets_of_size(verts, static_cast<std::size_t>(d + 1), 0, cur, out);
  }
  return out;
}

void require_in_shape(const SimplexKey& s, int vertex_count, int maxdim) {
  if (s.size() == 0) throw Error(ErrorCode::InvalidSimplex, "empty simplex");
  if (s.dim() > maxdim) {
    throw Error(ErrorCode::InvalidSimplex, describe(s) + " exceeds maxdim " + std::to_string(maxdim));
  }
  if (s[s.size() - 1] >= vertex_count) {
    throw Error(ErrorCode::InvalidSimplex,
                describe(s) + " uses a vertex outside 0.." + std::to_string(vertex_count - 1));
  }
}

CrispComplex::CrispComplex(int vertex_count, int maxdim) : vertex_count_(vertex_count), maxdim_(maxdim) {
  if (vertex_count < 0 || maxdim < 0) throw Error(ErrorCode::BadParams, "negative complex shape");
}

CrispComplex::CrispComplex(int vertex_count, int maxdim, std::set<SimplexKey> present)
    : CrispComplex(vertex_count, maxdim) {
  present_ = std::move(present);
  for (const auto& s : present_) {
    require_in_shape(s, vertex_count_, maxdim_);
    if (s.size() < 2) continue;
    for (const auto& f : faces(s)) {
      if (!present_.contains(f)) {
        throw Error(ErrorCode::NotFaceClosed, describe(s) + " is present but its face " + describe(f) + " is not");
      }
    }
  }
}

CrispComplex CrispComplex::closure(int vertex_count, int maxdim, const std::vector<SimplexKey>& generators) {
  std::set<SimplexKey> present;
  for (const auto& g : generators) {
    require_in_shape(g, vertex_count, maxdim);
    for (auto& f : all_faces(g)) present.insert(std::move(f));
  }
  return CrispComplex(vertex_count, maxdim, std::move(present));
}

CrispComplex minimal_complex(const SimplexKey& sigma, int vertex_count, int maxdim) {
  return CrispComplex::closure(vertex_count, maxdim, {sigma});
}

FuzzyComplex::FuzzyComplex(int vertex_count, int maxdim) : vertex_count_(vertex_count), maxdim_(maxdim) {
  if (vertex_count < 0 || maxdim < 0) throw Error(ErrorCode::BadParams, "negative complex shape");
}

FuzzyComplex FuzzyComplex::indicator(const CrispComplex& complex) {
  FuzzyComplex f(complex.vertex_count(), complex.maxdim());
  for (const auto& s : complex.simplices()) f.weights_.emplace(s, 1.0);
  return f;
}

double FuzzyComplex::weight(const SimplexKey& s) const {
  auto it = weights_.find(s);
  return it == weights_.end() ? 0.0 : it->second;
}

void FuzzyComplex::set(const SimplexKey& s, double w) {
  require_in_shape(s, vertex_count_, maxdim_);
  if (!(w >= 0.0 && w <= 1.0)) {
    throw Error(ErrorCode::BadParams, "weight " + std::to_string(w) + " of " + describe(s) + " outside [0,1]");
  }
  weights_[s] = w;
}

MonotonicityReport check_monotone(const FuzzyComplex& f, double tolerance) {
  MonotonicityReport report;
  for (const auto& [s, w] : f.weights()) {
    if (s.size() < 2 || w <= 0.0) continue;
    for (const auto& face : faces(s)) {
      if (f.weight(face) + tolerance < w) report.violations.emplace_back(face, s);
    }
  }
  return report;
}

double apply(FuzzyOp op, double a, double b) noexcept {
  switch (op) {
    case FuzzyOp::Min: return std::min(a, b);
    case FuzzyOp::Product: return a * b;
    case FuzzyOp::Max: return std::max(a, b);
    case FuzzyOp::ProbabilisticSum: return a + b - a * b;
  }
  return 0.0;
}

FuzzyOp dual(FuzzyOp op) noexcept {
  switch (op) {
    case FuzzyOp::Min: return FuzzyOp::Max;
    case FuzzyOp::Product: return FuzzyOp::ProbabilisticSum;
    case FuzzyOp::Max: return FuzzyOp::Min;
    case FuzzyOp::ProbabilisticSum: return FuzzyOp::Product;
  }
  return op;
}

bool is_tnorm(FuzzyOp op) noexcept { return op == FuzzyOp::Min || op == FuzzyOp::Product; }

FuzzyComplex merge(const FuzzyComplex& a, const FuzzyComplex& b, FuzzyOp op) {
  if (!a.same_shape(b)) throw Error(ErrorCode::ShapeMismatch, "merge: complexes have different shapes");
  FuzzyComplex out(a.vertex_count(), a.maxdim());
  std::set<SimplexKey> keys;
  for (const auto& [s, w] : a.weights()) keys.insert(s);
  for (const auto& [s, w] : b.weights()) keys.insert(s);
  for (const auto& s : keys) {
    // Probabilistic sum can land an ulp above 1.
    out.set(s, std::clamp(apply(op, a.weight(s), b.weight(s)), 0.0, 1.0));
  }
  return out;
}

FacePoset face_poset(int vertex_count, int maxdim, bool reversed) {
  FacePoset fp;
  fp.simplices = all_simplices(vertex_count, maxdim);
  const std::size_t n = fp.simplices.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    fp.index.emplace(fp.simplices[i], i);
    for (std::size_t j = 0; j < n; ++j) {
      const bool face = fp.simplices[i].is_face_of(fp.simplices[j]);
      if (reversed) {
        leq[j][i] = face;
      } else {
        leq[i][j] = face;
      }
    }
  }
  fp.poset = FinitePoset::validate(leq);
  return fp;
}

}  // namespace fuzzydr
