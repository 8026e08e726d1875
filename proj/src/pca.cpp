#include <cmath>

#include "fuzzydr/embed.hpp"
#include "fuzzydr/error.hpp"

namespace fuzzydr {

namespace {

constexpr double kPowerTol = 1e-9;
constexpr int kPowerMaxIter = 10000;
constexpr double kRankTol = 1e-10;

Eigen::VectorXd gaussian_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

}  // namespace

Eigen::MatrixXd random_init(Eigen::Index n, int d_o, std::uint64_t seed, double scale) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd y(n, d_o);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < d_o; ++c) y(i, c) = normal(rng);
  }
  return y;
}

PcaResult pca_init(const Eigen::MatrixXd& x, int d_o, std::uint64_t seed) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (d_o <= 0 || d_o > d) {
    throw Error(ErrorCode::BadParams, "output dimension " + std::to_string(d_o) + " must lie in 1.." +
                                          std::to_string(d));
  }
  const Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
  Rng rng(seed);
  PcaResult out;
  out.variances.resize(d_o);
  Eigen::MatrixXd basis(d, d_o);
  double top = 0.0;
  for (int c = 0; c < d_o; ++c) {
    Eigen::VectorXd v = gaussian_vector(d, rng);
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < kPowerMaxIter; ++it) {
      Eigen::VectorXd w = cov * v;
      const double norm = w.norm();
      if (norm == 0.0) {
        lambda = 0.0;
        break;
      }
      w /= norm;
      const double change = std::min((w - v).norm(), (w + v).norm());
      v = w;
      lambda = v.dot(cov * v);
      if (change < kPowerTol) break;
    }
    if (c == 0) top = lambda;
    if (!(lambda > 0.0 && lambda > kRankTol * top)) {
      out.fallback = true;
      out.y = random_init(n, d_o, seed);
      out.variances.setZero();
      return out;
    }
    out.variances(c) = lambda;
    basis.col(c) = v;
    cov -= lambda * v * v.transpose();
  }
  out.y = centred * basis;
  return out;
}

}  // namespace fuzzydr
