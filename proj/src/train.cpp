#include <algorithm>
#include <cmath>

#include "fuzzydr/embed.hpp"
#include "fuzzydr/error.hpp"

namespace fuzzydr {

namespace {

constexpr double kInitExtent = 10.0;

void validate(const Dataset& data, const TrainConfig& c) {
  const Eigen::Index n = data.points.rows();
  if (!data.points.allFinite()) throw Error(ErrorCode::BadParams, "dataset has non-finite entries");
  if (c.mode == Mode::Triplet && n < 3) throw Error(ErrorCode::BadParams, "triplet mode needs at least 3 points");
  if (c.k <= 0 || c.k >= n) throw Error(ErrorCode::KTooLarge, "k must satisfy 0 < k < n");
  if (c.d_o <= 0) throw Error(ErrorCode::BadParams, "output dimension must be positive");
  if (c.epochs < 0) throw Error(ErrorCode::BadParams, "epochs must be nonnegative");
  if (c.batch <= 0) throw Error(ErrorCode::BadParams, "batch size must be positive");
  if (c.neg_rate < 0) throw Error(ErrorCode::BadParams, "negative rate must be nonnegative");
  if (!(c.learning_rate > 0.0)) throw Error(ErrorCode::BadParams, "learning rate must be positive");
  if (!(c.grad_clip > 0.0)) throw Error(ErrorCode::BadParams, "gradient clip must be positive");
}

Eigen::MatrixXd initial_layout(const Dataset& data, const TrainConfig& c, bool& fallback) {
  Eigen::MatrixXd y;
  fallback = false;
  if (c.init == Init::Pca && c.d_o <= data.points.cols()) {
    PcaResult pca = pca_init(data.points, c.d_o, c.seed);
    fallback = pca.fallback;
    y = std::move(pca.y);
  } else {
    y = random_init(data.points.rows(), c.d_o, c.seed);
  }
  const double extent = y.cwiseAbs().maxCoeff();
  if (extent > 0.0) y *= kInitExtent / extent;
  return y;
}

}  // namespace

ScaleDistribution default_phi_x(Mode mode) {
  return mode == Mode::Edge ? ScaleDistribution::exponential(1.0) : ScaleDistribution::loglogistic(1.0, 1.0);
}

ScaleDistribution default_phi_y(Mode mode) {
  // UMAP's curve for min_dist = 0.1 in the edge mode.
  return mode == Mode::Edge ? ScaleDistribution::loglogistic(1.577, 0.8951) : ScaleDistribution::loglogistic(1.0, 1.0);
}

std::string to_string(Mode m) { return m == Mode::Edge ? "edge" : "triplet"; }
std::string to_string(Init i) { return i == Init::Pca ? "pca" : "random"; }
std::string to_string(RadiusMode r) {
  switch (r) {
    case RadiusMode::Extrinsic: return "extrinsic";
    case RadiusMode::Intrinsic: return "intrinsic";
    case RadiusMode::IntrinsicSoft: return "intrinsic_soft";
  }
  return "extrinsic";
}

TrainResult train(const Dataset& data, const TrainConfig& config) {
  validate(data, config);
  const ScaleDistribution phi_x = config.phi_x.value_or(default_phi_x(config.mode));
  const ScaleDistribution phi_y = config.phi_y.value_or(default_phi_y(config.mode));
  const Eigen::MatrixXd& x = data.points;
  const auto n = static_cast<std::size_t>(x.rows());

  TrainResult out;
  out.y = initial_layout(data, config, out.pca_fallback);
  if (config.epochs == 0) return out;

  const NeighborGraph graph = exact_knn(x, config.k);
  LocalScaling scaling = local_scaling(graph);
  if (!config.local_scaling) {
    std::fill(scaling.rho.begin(), scaling.rho.end(), 0.0);
    std::fill(scaling.sigma.begin(), scaling.sigma.end(), scaling.global_scale);
  }
  std::vector<EdgeSample> edges;
  if (config.mode == Mode::Edge) edges = edge_weights(x, graph, scaling, phi_x);

  TripletWeightSource source;
  source.x = &x;
  source.global_scale = scaling.global_scale;
  source.mode = config.radius;
  source.graph = &graph;

  Rng rng(config.seed);
  const auto batch = static_cast<std::size_t>(config.batch);
  const std::size_t minibatches = std::max<std::size_t>(1, n / batch);
  const std::size_t negatives = batch * static_cast<std::size_t>(config.neg_rate);
  std::uniform_int_distribution<std::size_t> pick_edge(0, edges.empty() ? 0 : edges.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_point(0, n - 1);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double rate = config.learning_rate * (1.0 - static_cast<double>(epoch) / config.epochs);
    double epoch_loss = 0.0;
    std::size_t terms = 0;
    for (std::size_t mb = 0; mb < minibatches; ++mb) {
      LossGrad lg;
      if (config.mode == Mode::Triplet) {
        TripletBatch tb;
        tb.positives.reserve(batch);
        tb.mu.reserve(batch);
        for (std::size_t p = 0; p < batch; ++p) {
          tb.positives.push_back(sample_positive_triplet(rng, graph));
          tb.mu.push_back(triplet_weight(tb.positives.back(), source, phi_x));
        }
        for (const auto& s : sample_negative_triplets(rng, graph, negatives)) tb.negatives.push_back(s.t);
        lg = triplet_loss_and_grad(tb, out.y, phi_y);
        terms += tb.positives.size() + tb.negatives.size();
      } else {
        std::vector<EdgeSample> eb;
        eb.reserve(batch + negatives);
        for (std::size_t p = 0; p < batch; ++p) {
          const EdgeSample& e = edges[pick_edge(rng)];
          eb.push_back(e);
          for (int q = 0; q < config.neg_rate; ++q) {
            std::size_t other = pick_point(rng);
            while (other == static_cast<std::size_t>(e.i)) other = pick_point(rng);
            eb.push_back({e.i, static_cast<int>(other), 0.0});
          }
        }
        lg = edge_umap_loss_and_grad(eb, out.y, phi_y);
        terms += eb.size();
      }
      if (!std::isfinite(lg.loss)) {
        throw Error(ErrorCode::NaNGuard, "non-finite loss in epoch " + std::to_string(epoch));
      }
      epoch_loss += lg.loss;
      out.y -= rate * lg.grad.cwiseMax(-config.grad_clip).cwiseMin(config.grad_clip);
    }
    out.loss_trace.push_back(epoch_loss / static_cast<double>(std::max<std::size_t>(terms, 1)));
  }
  return out;
}

}  // namespace fuzzydr
