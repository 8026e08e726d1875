#include "fuzzydr/filtrations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "fuzzydr/error.hpp"

namespace fuzzydr {

namespace {

constexpr double kSymTol = 1e-12;

std::size_t idx(int v) { return static_cast<std::size_t>(v); }

void require_points(const SimplexKey& sigma, const DistanceMatrix& d) {
  if (sigma.size() == 0 || static_cast<std::size_t>(sigma[sigma.size() - 1]) >= d.size()) {
    throw Error(ErrorCode::InvalidSimplex, "simplex uses a vertex outside the distance matrix");
  }
}

std::vector<SimplexKey> shape_simplices(const DistanceMatrix& d, int maxdim) {
  return all_simplices(static_cast<int>(d.size()), maxdim);
}

}  // namespace

DistanceMatrix::DistanceMatrix(const std::vector<std::vector<double>>& rows) : n_(rows.size()), d_(n_ * n_) {
  for (std::size_t i = 0; i < n_; ++i) {
    if (rows[i].size() != n_) throw Error(ErrorCode::InvalidDistanceMatrix, "distance matrix is not square");
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = rows[i][j];
      if (!std::isfinite(v) || v < 0.0) {
        throw Error(ErrorCode::InvalidDistanceMatrix, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                           ") is negative or not finite");
      }
      d_[i * n_ + j] = v;
    }
    if (rows[i][i] != 0.0) throw Error(ErrorCode::InvalidDistanceMatrix, "nonzero diagonal entry");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (std::abs(d_[i * n_ + j] - d_[j * n_ + i]) > kSymTol) {
        throw Error(ErrorCode::InvalidDistanceMatrix,
                    "entries (" + std::to_string(i) + "," + std::to_string(j) + ") are not symmetric");
      }
    }
  }
}

DistanceMatrix DistanceMatrix::from_points(std::span<const double> data, std::size_t n, std::size_t dim) {
  if (data.size() != n * dim) throw Error(ErrorCode::ShapeMismatch, "point array size differs from n * dim");
  DistanceMatrix m;
  m.n_ = n;
  m.d_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double t = data[i * dim + c] - data[j * dim + c];
        s += t * t;
      }
      m.d_[i * n + j] = m.d_[j * n + i] = std::sqrt(s);
    }
  }
  return m;
}

void DistanceMatrix::check_triangle_inequality(double tolerance) const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t k = 0; k < n_; ++k) {
        if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k) + tolerance) {
          throw Error(ErrorCode::TriangleInequalityViolation, "d(" + std::to_string(i) + "," + std::to_string(k) +
                                                                   ") exceeds the path through " + std::to_string(j));
        }
      }
    }
  }
}

double vr_scale(const SimplexKey& sigma, const DistanceMatrix& d) {
  require_points(sigma, d);
  double r = 0.0;
  for (std::size_t a = 0; a < sigma.size(); ++a) {
    for (std::size_t b = a + 1; b < sigma.size(); ++b) r = std::max(r, d(idx(sigma[a]), idx(sigma[b])));
  }
  return r;
}

CrispComplex vr_complex(const DistanceMatrix& d, double r, int maxdim) {
  if (!(r >= 0.0)) throw Error(ErrorCode::NegativeScale, "negative VR scale");
  std::set<SimplexKey> present;
  for (auto& s : shape_simplices(d, maxdim)) {
    if (vr_scale(s, d) <= r) present.insert(std::move(s));
  }
  return CrispComplex(static_cast<int>(d.size()), maxdim, std::move(present));
}

namespace {

void check_triangle(double a, double b, double c) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) throw Error(ErrorCode::NegativeScale, "negative side length");
  const double dmax = std::max({a, b, c});
  const double tol = 1e-12 * (1.0 + dmax);
  if (dmax > a + b + c - dmax + tol) {
    std::ostringstream os;
    os << "side lengths " << a << ", " << b << ", " << c << " violate the triangle inequality";
    throw Error(ErrorCode::TriangleInequalityViolation, os.str());
  }
}

double heron_q(double a, double b, double c) {
  const double a2 = a * a;
  const double b2 = b * b;
  const double c2 = c * c;
  return 2.0 * (a2 * b2 + b2 * c2 + c2 * a2) - a2 * a2 - b2 * b2 - c2 * c2;
}

bool obtuse_branch(double a, double b, double c) {
  const double dmax = std::max({a, b, c});
  return a * a + b * b + c * c <= 2.0 * dmax * dmax;
}

}  // namespace

double cech3_radius(double dij, double djk, double dki) {
  check_triangle(dij, djk, dki);
  if (obtuse_branch(dij, djk, dki)) return 0.5 * std::max({dij, djk, dki});
  return dij * djk * dki / std::sqrt(heron_q(dij, djk, dki));
}

std::array<double, 3> cech3_radius_gradient(double a, double b, double c) {
  check_triangle(a, b, c);
  std::array<double, 3> g{0.0, 0.0, 0.0};
  if (obtuse_branch(a, b, c)) {
    const std::array<double, 3> sides{a, b, c};
    g[static_cast<std::size_t>(std::max_element(sides.begin(), sides.end()) - sides.begin())] = 0.5;
    return g;
  }
  const double q = heron_q(a, b, c);
  const double sq = std::sqrt(q);
  const double abc = a * b * c;
  const double denom = 2.0 * q * sq;
  g[0] = b * c / sq - abc * (4.0 * a * b * b + 4.0 * a * c * c - 4.0 * a * a * a) / denom;
  g[1] = a * c / sq - abc * (4.0 * b * a * a + 4.0 * b * c * c - 4.0 * b * b * b) / denom;
  g[2] = a * b / sq - abc * (4.0 * c * a * a + 4.0 * c * b * b - 4.0 * c * c * c) / denom;
  return g;
}

double cech_extrinsic_scale(const SimplexKey& sigma, const DistanceMatrix& d) {
  require_points(sigma, d);
  switch (sigma.size()) {
    case 1: return 0.0;
    case 2: return 0.5 * d(idx(sigma[0]), idx(sigma[1]));
    case 3:
      return cech3_radius(d(idx(sigma[0]), idx(sigma[1])), d(idx(sigma[1]), idx(sigma[2])),
                          d(idx(sigma[2]), idx(sigma[0])));
    default:
      throw Error(ErrorCode::BadParams, "extrinsic Cech radius is only available for up to three points");
  }
}

double soft_max(std::span<const double> x, double tau) {
  if (x.empty()) throw Error(ErrorCode::BadParams, "soft_max of an empty set");
  if (!(tau > 0.0)) throw Error(ErrorCode::NonPositiveParam, "temperature must be positive");
  const double m = *std::max_element(x.begin(), x.end());
  double s = 0.0;
  for (double v : x) s += std::exp((v - m) / tau);
  return m + tau * std::log(s);
}

double soft_min(std::span<const double> x, double tau) {
  std::vector<double> neg(x.begin(), x.end());
  for (double& v : neg) v = -v;
  return -soft_max(neg, tau);
}

double intrinsic_cech_radius(const SimplexKey& sigma, const DistanceMatrix& d, std::span<const int> candidates,
                             std::optional<double> tau) {
  require_points(sigma, d);
  if (candidates.empty()) throw Error(ErrorCode::BadParams, "no candidate centres");
  std::vector<double> outer;
  outer.reserve(candidates.size());
  std::vector<double> inner(sigma.size());
  for (int c : candidates) {
    if (c < 0 || static_cast<std::size_t>(c) >= d.size()) throw Error(ErrorCode::BadParams, "candidate out of range");
    for (std::size_t v = 0; v < sigma.size(); ++v) inner[v] = d(idx(sigma[v]), idx(c));
    outer.push_back(tau ? soft_max(inner, *tau) : *std::max_element(inner.begin(), inner.end()));
  }
  return tau ? soft_min(outer, *tau) : *std::min_element(outer.begin(), outer.end());
}

double appearance_scale(const SimplexKey& sigma, const DistanceMatrix& d, FiltrationKind kind) {
  switch (kind) {
    case FiltrationKind::VR: return vr_scale(sigma, d);
    case FiltrationKind::CechExtrinsic: return cech_extrinsic_scale(sigma, d);
    case FiltrationKind::CechIntrinsic: {
      if (sigma.size() == 1) return 0.0;
      std::vector<int> all(d.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      return intrinsic_cech_radius(sigma, d, all);
    }
  }
  return 0.0;
}

std::vector<std::pair<SimplexKey, double>> filtration_values(const DistanceMatrix& d, int maxdim,
                                                             FiltrationKind kind) {
  if (kind == FiltrationKind::CechExtrinsic && maxdim > 2) {
    throw Error(ErrorCode::BadParams, "extrinsic Cech filtration is limited to dimension two");
  }
  std::vector<std::pair<SimplexKey, double>> out;
  for (auto& s : shape_simplices(d, maxdim)) {
    const double r = appearance_scale(s, d, kind);
    out.emplace_back(std::move(s), r);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

ComplexMeasure filtration_measure(const DistanceMatrix& d, const ScaleDistribution& cdf, int maxdim,
                                  FiltrationKind kind) {
  if (d.size() > kMaxFiltrationMeasurePoints) {
    throw Error(ErrorCode::CapExceeded, std::to_string(d.size()) + " points exceed the filtration measure cap of " +
                                            std::to_string(kMaxFiltrationMeasurePoints));
  }
  const int n = static_cast<int>(d.size());
  const auto values = filtration_values(d, maxdim, kind);
  std::vector<double> scales{0.0};
  for (const auto& [s, r] : values) {
    if (r > scales.back()) scales.push_back(r);
  }
  std::vector<ComplexMeasure::Entry> support;
  std::set<SimplexKey> present;
  std::size_t next = 0;
  for (std::size_t j = 0; j < scales.size(); ++j) {
    while (next < values.size() && values[next].second <= scales[j]) present.insert(values[next++].first);
    const double upper = j + 1 < scales.size() ? cdf.cdf(scales[j + 1]) : 1.0;
    support.push_back({CrispComplex(n, maxdim, present), upper - cdf.cdf(scales[j])});
  }
  return ComplexMeasure(n, maxdim, std::move(support));
}

FuzzyComplex fuzzy_from_filtration(const DistanceMatrix& d, const ScaleDistribution& cdf, int maxdim,
                                   FiltrationKind kind) {
  FuzzyComplex f(static_cast<int>(d.size()), maxdim);
  for (const auto& [s, r] : filtration_values(d, maxdim, kind)) f.set(s, cdf.survival(r));
  return f;
}

ComplexMeasure merged_filtration_measure(const DistanceMatrix& d1, const DistanceMatrix& d2,
                                         const ScaleDistribution& cdf, int maxdim, BoolOp op) {
  if (d1.size() != d2.size()) throw Error(ErrorCode::ShapeMismatch, "metrics on different point counts");
  if (d1.size() > kMaxFiltrationMeasurePoints) throw Error(ErrorCode::CapExceeded, "too many points");
  const int n = static_cast<int>(d1.size());
  std::set<double> breaks{0.0};
  for (const auto* d : {&d1, &d2}) {
    for (const auto& [s, r] : filtration_values(*d, maxdim, FiltrationKind::VR)) breaks.insert(r);
  }
  const std::vector<double> b(breaks.begin(), breaks.end());
  std::map<CrispComplex, double> acc;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const CrispComplex k1 = vr_complex(d1, b[j], maxdim);
    const CrispComplex k2 = vr_complex(d2, b[j], maxdim);
    std::set<SimplexKey> present;
    if (op == BoolOp::Or) {
      std::set_union(k1.simplices().begin(), k1.simplices().end(), k2.simplices().begin(), k2.simplices().end(),
                     std::inserter(present, present.end()));
    } else {
      std::set_intersection(k1.simplices().begin(), k1.simplices().end(), k2.simplices().begin(),
                            k2.simplices().end(), std::inserter(present, present.end()));
    }
    const double upper = j + 1 < b.size() ? cdf.cdf(b[j + 1]) : 1.0;
    acc[CrispComplex(n, maxdim, std::move(present))] += upper - cdf.cdf(b[j]);
  }
  std::vector<ComplexMeasure::Entry> support;
  for (auto& [c, p] : acc) support.push_back({c, p});
  return ComplexMeasure(n, maxdim, std::move(support));
}

GromovProducts gromov_products(int i, int j, int k, const DistanceMatrix& d) {
  const double dij = d(idx(i), idx(j));
  const double dik = d(idx(i), idx(k));
  const double djk = d(idx(j), idx(k));
  return {(dij + dik - djk) / 2.0, (dij + djk - dik) / 2.0, (dik + djk - dij) / 2.0};
}

double curvature_rho3(int i, int j, int k, const DistanceMatrix& d, std::span<const int> candidates) {
  const GromovProducts g = gromov_products(i, j, k, d);
  if (!(g.r1 > 0.0 && g.r2 > 0.0 && g.r3 > 0.0)) {
    throw Error(ErrorCode::DegenerateGromovProduct, "Gromov products of (" + std::to_string(i) + "," +
                                                        std::to_string(j) + "," + std::to_string(k) +
                                                        ") are not all positive");
  }
  if (candidates.empty()) throw Error(ErrorCode::BadParams, "no candidate centres");
  double best = std::numeric_limits<double>::infinity();
  for (int x : candidates) {
    const double v = std::max({d(idx(i), idx(x)) / g.r1, d(idx(j), idx(x)) / g.r2, d(idx(k), idx(x)) / g.r3});
    best = std::min(best, v);
  }
  return best;
}

FuzzyComplex curvature_weights(const DistanceMatrix& d, const ScaleDistribution& cdf,
                               std::span<const int> candidates) {
  const int n = static_cast<int>(d.size());
  FuzzyComplex f(n, 2);
  const double edge = cdf.survival(1.0);
  for (int i = 0; i < n; ++i) f.set({i}, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) f.set({i, j}, edge);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const double rho = curvature_rho3(i, j, k, d, candidates);
        f.set({i, j, k}, std::min(cdf.survival(rho), edge));
      }
    }
  }
  return f;
}

}  // namespace fuzzydr
