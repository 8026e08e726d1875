#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "fuzzydr/embed.hpp"
#include "fuzzydr/error.hpp"
#include "fuzzydr/filtrations.hpp"

namespace fuzzydr {

namespace {

// Clamping bounds the loss; the gradient still flows through nu so that
// collapsed or far-apart configurations keep moving.
double clamp_nu(double nu, double eps) { return std::clamp(nu, eps, 1.0 - eps); }

double xlog_ratio(double a, double b) { return a > 0.0 ? a * std::log(a / b) : 0.0; }

[[noreturn]] void nan_guard(const char* what, int i, int j, int k) {
  std::ostringstream os;
  os << "non-finite gradient in " << what << " (" << i << ", " << j;
  if (k >= 0) os << ", " << k;
  os << ")";
  throw Error(ErrorCode::NaNGuard, os.str());
}

// Adds s * d|y_a - y_b| / dy to the gradient rows of a and b.
void push_distance(Eigen::MatrixXd& grad, const Eigen::MatrixXd& y, int a, int b, double len, double s) {
  if (len <= 0.0 || s == 0.0) return;
  const Eigen::RowVectorXd u = (y.row(a) - y.row(b)) / len;
  grad.row(a) += s * u;
  grad.row(b) -= s * u;
}

// Loss of one triplet, accumulating its gradient into `grad`.
double triplet_term(const Triplet& t, double mu, bool positive, const Eigen::MatrixXd& y,
                    const ScaleDistribution& dist_y, double eps, Eigen::MatrixXd& grad) {
  const double a = (y.row(t.i) - y.row(t.j)).norm();
  const double b = (y.row(t.j) - y.row(t.k)).norm();
  const double c = (y.row(t.k) - y.row(t.i)).norm();
  const double r = cech3_radius(a, b, c);
  const double nu = clamp_nu(dist_y.survival(r), eps);
  double loss = 0.0;
  double dl_dnu = 0.0;
  if (positive) {
    loss = -mu * std::log(nu);
    dl_dnu = -mu / nu;
  } else {
    loss = -std::log1p(-nu);
    dl_dnu = 1.0 / (1.0 - nu);
  }
  if (dl_dnu == 0.0) return loss;
  const double dl_dr = -dl_dnu * dist_y.density(r);
  if (!std::isfinite(dl_dr)) nan_guard("triplet loss", t.i, t.j, t.k);
  const auto g = cech3_radius_gradient(a, b, c);
  push_distance(grad, y, t.i, t.j, a, dl_dr * g[0]);
  push_distance(grad, y, t.j, t.k, b, dl_dr * g[1]);
  push_distance(grad, y, t.k, t.i, c, dl_dr * g[2]);
  return loss;
}

void check_finite(const Eigen::MatrixXd& grad, const char* what) {
  if (!grad.allFinite()) throw Error(ErrorCode::NaNGuard, std::string("non-finite gradient in ") + what);
}

}  // namespace

LossGrad triplet_loss_and_grad(const TripletBatch& batch, const Eigen::MatrixXd& y, const ScaleDistribution& dist_y,
                               double eps) {
  if (batch.mu.size() != batch.positives.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one weight per positive triplet is required");
  }
  LossGrad out;
  out.grad = Eigen::MatrixXd::Zero(y.rows(), y.cols());
  for (std::size_t p = 0; p < batch.positives.size(); ++p) {
    out.loss += triplet_term(batch.positives[p], batch.mu[p], true, y, dist_y, eps, out.grad);
  }
  for (const auto& t : batch.negatives) out.loss += triplet_term(t, 0.0, false, y, dist_y, eps, out.grad);
  check_finite(out.grad, "triplet loss");
  return out;
}

LossGrad edge_umap_loss_and_grad(const std::vector<EdgeSample>& edges, const Eigen::MatrixXd& y,
                                 const ScaleDistribution& dist_y, double eps) {
  LossGrad out;
  out.grad = Eigen::MatrixXd::Zero(y.rows(), y.cols());
  for (const auto& e : edges) {
    const double d = (y.row(e.i) - y.row(e.j)).norm();
    const double nu = clamp_nu(dist_y.survival(d), eps);
    out.loss += xlog_ratio(e.mu, nu) + xlog_ratio(1.0 - e.mu, 1.0 - nu);
    const double dl_dnu = -e.mu / nu + (1.0 - e.mu) / (1.0 - nu);
    if (dl_dnu == 0.0) continue;
    const double dl_dd = -dl_dnu * dist_y.density(d);
    if (!std::isfinite(dl_dd)) nan_guard("edge loss", e.i, e.j, -1);
    push_distance(out.grad, y, e.i, e.j, d, dl_dd);
  }
  check_finite(out.grad, "edge loss");
  return out;
}

}  // namespace fuzzydr
