#include <algorithm>
#include <array>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

#include "fuzzydr/embed.hpp"
#include "fuzzydr/error.hpp"
#include "fuzzydr/eval.hpp"

namespace fuzzydr {

namespace {

// Indices of all other points ordered by (distance, index).
std::vector<int> ranked_neighbors(const Eigen::MatrixXd& p, Eigen::Index i) {
  const Eigen::Index n = p.rows();
  std::vector<std::pair<double, int>> row;
  row.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != i) row.emplace_back((p.row(i) - p.row(j)).squaredNorm(), static_cast<int>(j));
  }
  std::sort(row.begin(), row.end());
  std::vector<int> out(row.size());
  for (std::size_t r = 0; r < row.size(); ++r) out[r] = row[r].second;
  return out;
}

DistanceMatrix subset_distances(const Eigen::MatrixXd& p, const std::vector<int>& idx) {
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(idx.size()), p.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) sub.row(static_cast<Eigen::Index>(r)) = p.row(idx[r]);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = sub;
  return DistanceMatrix::from_points({rm.data(), static_cast<std::size_t>(rm.size())}, idx.size(),
                                     static_cast<std::size_t>(p.cols()));
}

}  // namespace

double trustworthiness(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int k) {
  if (x.rows() != y.rows()) throw Error(ErrorCode::ShapeMismatch, "X and Y have different point counts");
  const Eigen::Index n = x.rows();
  if (k <= 0 || 2 * static_cast<Eigen::Index>(k) >= n) {
    throw Error(ErrorCode::KTooLarge, "trustworthiness needs 0 < k < n/2");
  }
  const auto un = static_cast<std::size_t>(n);
  const auto uk = static_cast<std::size_t>(k);
  double penalty = 0.0;
  std::vector<int> rank_x(un);
  std::vector<char> in_x(un);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto order_x = ranked_neighbors(x, i);
    std::fill(in_x.begin(), in_x.end(), 0);
    for (std::size_t r = 0; r < order_x.size(); ++r) {
      rank_x[static_cast<std::size_t>(order_x[r])] = static_cast<int>(r + 1);
      if (r < uk) in_x[static_cast<std::size_t>(order_x[r])] = 1;
    }
    const auto order_y = ranked_neighbors(y, i);
    for (std::size_t r = 0; r < uk; ++r) {
      const auto j = static_cast<std::size_t>(order_y[r]);
      if (!in_x[j]) penalty += rank_x[j] - k;
    }
  }
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return 1.0 - 2.0 / (nn * kk * (2.0 * nn - 3.0 * kk - 1.0)) * penalty;
}

double procrustes_global(const Eigen::MatrixXd& y, const Eigen::MatrixXd& ypca) {
  if (y.rows() != ypca.rows() || y.cols() != ypca.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "Y and Ypca differ in shape");
  }
  const Eigen::MatrixXd a = y.rowwise() - y.colwise().mean();
  const Eigen::MatrixXd b = ypca.rowwise() - ypca.colwise().mean();
  const double norm_b = b.norm();
  if (norm_b == 0.0) throw Error(ErrorCode::ZeroNorm, "reference embedding is all zeros after centring");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.transpose() * a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd r = svd.matrixU() * svd.matrixV().transpose();
  return 1.0 - (a - b * r).norm() / norm_b;
}

MetricReport evaluate(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const EvalConfig& config) {
  if (x.rows() != y.rows()) throw Error(ErrorCode::ShapeMismatch, "X and Y have different point counts");
  if (y.cols() > x.cols()) throw Error(ErrorCode::ShapeMismatch, "embedding has more columns than the data");
  if (config.subsample < 2 || config.repeats < 1) throw Error(ErrorCode::BadParams, "invalid subsampling settings");
  MetricReport rep;
  rep.k = config.k;
  rep.repeats = config.repeats;
  rep.seed = config.seed;
  rep.trustworthiness = trustworthiness(x, y, config.k);
  rep.procrustesG = procrustes_global(y, pca_init(x, static_cast<int>(y.cols()), config.seed).y);

  const auto n = static_cast<std::size_t>(x.rows());
  const std::size_t m = std::min(static_cast<std::size_t>(config.subsample), n);
  rep.subsample = static_cast<int>(m);
  Rng rng(config.seed);
  std::vector<std::vector<int>> draws(static_cast<std::size_t>(config.repeats));
  std::vector<int> perm(n);
  for (auto& draw : draws) {
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = std::uniform_int_distribution<std::size_t>(i, n - 1)(rng);
      std::swap(perm[i], perm[j]);
    }
    draw.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(m));
    std::sort(draw.begin(), draw.end());
  }

  std::vector<std::array<double, 2>> results(draws.size());
  auto work = [&](std::size_t r) {
    const auto px = vr_persistence(subset_distances(x, draws[r]));
    const auto py = vr_persistence(subset_distances(y, draws[r]));
    results[r] = {wasserstein2(px[0], py[0]), wasserstein2(px[1], py[1])};
  };
  const std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(config.threads, 1)), 1,
                                                      draws.size());
  if (threads == 1) {
    for (std::size_t r = 0; r < draws.size(); ++r) work(r);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t r = t; r < draws.size(); r += threads) work(r);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (const auto& r : results) {
    rep.wassersteinH0 += r[0];
    rep.wassersteinH1 += r[1];
  }
  rep.wassersteinH0 /= static_cast<double>(results.size());
  rep.wassersteinH1 /= static_cast<double>(results.size());
  return rep;
}

}  // namespace fuzzydr
