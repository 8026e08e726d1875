#pragma once

// Embedding engines: generalized UMAP on edges and the Cech-radius triplet
// variant, with exact kNN, PCA initialization, samplers, losses and SGD.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuzzydr/scale_dist.hpp"

namespace fuzzydr {

using Rng = std::mt19937_64;

struct Dataset {
  Eigen::MatrixXd points;   ///< n x d, one row per point
  std::vector<int> labels;  ///< empty or one per point
};

struct Neighbor {
  int id;
  double distance;
};

struct NeighborGraph {
  int k = 0;
  /// Per point, the k nearest other points by ascending distance.
  std::vector<std::vector<Neighbor>> neighbors;

  std::size_t size() const noexcept { return neighbors.size(); }
  bool contains(int i, int j) const;
};

/// Exact Euclidean kNN; ties broken by lower index. Throws KTooLarge unless
/// 0 < k < n.
NeighborGraph exact_knn(const Eigen::MatrixXd& x, int k);

struct LocalScaling {
  std::vector<double> rho;    ///< distance to the nearest neighbour
  std::vector<double> sigma;  ///< mean kNN distance minus rho, floored at 1e-8
  double global_scale = 0.0;  ///< largest distance from a point to its k-th neighbour
};

inline constexpr double kSigmaFloor = 1e-8;

/// Throws NonPositiveScale when every kNN distance is zero.
LocalScaling local_scaling(const NeighborGraph& graph);

/// Local pseudo-metric around point i: max(0, (d - rho_i) / sigma_i) for
/// j in N(i), 0 for i == j, +inf otherwise.
double local_scaled_distance(int i, int j, const Eigen::MatrixXd& x, const NeighborGraph& graph,
                             const LocalScaling& scaling);

/// Radius at which balls around two points under metrics scaled by a and b
/// meet: ab / (a + b) * d. Throws NonPositiveScale.
double rescaled_edge_radius(double a, double b, double d);

struct PcaResult {
  Eigen::MatrixXd y;
  Eigen::VectorXd variances;  ///< eigenvalues of the covariance, descending
  bool fallback = false;      ///< true when the data had too few directions
};

/// Projection of the centred data onto its top d_o principal directions,
/// found by power iteration with deflation. Rank-deficient input falls back to
/// Gaussian noise of scale 1e-2. Throws BadParams when d_o exceeds d.
PcaResult pca_init(const Eigen::MatrixXd& x, int d_o, std::uint64_t seed);

/// Gaussian noise with standard deviation `scale`.
Eigen::MatrixXd random_init(Eigen::Index n, int d_o, std::uint64_t seed, double scale = 1e-2);

struct Triplet {
  int i;
  int j;
  int k;
  friend bool operator==(const Triplet&, const Triplet&) = default;
};

inline constexpr int kMaxSampleAttempts = 100;

/// i uniform, j uniform in N(i), k uniform in (N(i) u N(j)) minus {i, j}.
/// Throws DegenerateNeighborhood after kMaxSampleAttempts empty draws.
Triplet sample_positive_triplet(Rng& rng, const NeighborGraph& graph);

struct NegativeSample {
  Triplet t;
  bool semi_local;  ///< drawn by the neighbour-pair branch
};

/// With probability 1/2 a uniform distinct triple, otherwise (i, j) with
/// j in N(i) and k outside N(i) u N(j) u {i, j}. Graphs with no outside point
/// at all use the uniform branch only.
std::vector<NegativeSample> sample_negative_triplets(Rng& rng, const NeighborGraph& graph, std::size_t count);

enum class RadiusMode { Extrinsic, Intrinsic, IntrinsicSoft };

struct TripletWeightSource {
  const Eigen::MatrixXd* x = nullptr;
  double global_scale = 1.0;
  RadiusMode mode = RadiusMode::Extrinsic;
  /// Candidate centres for the intrinsic modes are N(i) u N(j) u N(k) u {i,j,k}.
  const NeighborGraph* graph = nullptr;
  /// Soft min/max temperature, in units of the global scale.
  double tau = 0.1;
};

/// survival(r(x_i, x_j, x_k) / global_scale).
double triplet_weight(const Triplet& t, const TripletWeightSource& src, const ScaleDistribution& dist);

struct TripletBatch {
  std::vector<Triplet> positives;
  std::vector<double> mu;  ///< one input-space weight per positive
  std::vector<Triplet> negatives;
};

struct LossGrad {
  double loss = 0.0;
  Eigen::MatrixXd grad;
};

inline constexpr double kNuClamp = 1e-4;

/// Sum of -mu ln nu over positives and -ln(1 - nu) over negatives, with
/// nu = survival_Y(r(y_i, y_j, y_k)) clamped to [eps, 1 - eps]. Throws
/// NaNGuard naming the triplet whose gradient is not finite.
LossGrad triplet_loss_and_grad(const TripletBatch& batch, const Eigen::MatrixXd& y, const ScaleDistribution& dist_y,
                               double eps = kNuClamp);

struct EdgeSample {
  int i;
  int j;
  double mu;
};

/// Per-edge fuzzy cross entropy against nu = survival_Y(|y_i - y_j|), with
/// the same clamping. Throws NaNGuard.
LossGrad edge_umap_loss_and_grad(const std::vector<EdgeSample>& edges, const Eigen::MatrixXd& y,
                                 const ScaleDistribution& dist_y, double eps = kNuClamp);

/// Symmetric kNN edge weights: survival_X of the local scaled distance seen
/// from each endpoint, merged with the probabilistic sum.
std::vector<EdgeSample> edge_weights(const Eigen::MatrixXd& x, const NeighborGraph& graph,
                                     const LocalScaling& scaling, const ScaleDistribution& dist_x);

enum class Mode { Edge, Triplet };
enum class Init { Pca, Random };

struct TrainConfig {
  Mode mode = Mode::Triplet;
  int k = 15;
  int d_o = 2;
  int epochs = 200;
  int batch = 64;
  int neg_rate = 5;
  double learning_rate = 1.0;
  std::optional<ScaleDistribution> phi_x;  ///< defaults per mode, see default_phi_x
  std::optional<ScaleDistribution> phi_y;
  std::uint64_t seed = 0;
  Init init = Init::Pca;
  RadiusMode radius = RadiusMode::Extrinsic;
  /// Edge mode only: false drops rho/sigma and divides by the global scale.
  bool local_scaling = true;
  /// Per-coordinate cap on each SGD update before the learning rate.
  double grad_clip = 4.0;
};

ScaleDistribution default_phi_x(Mode mode);
ScaleDistribution default_phi_y(Mode mode);

std::string to_string(Mode m);
std::string to_string(Init i);
std::string to_string(RadiusMode r);

struct TrainResult {
  Eigen::MatrixXd y;
  std::vector<double> loss_trace;  ///< mean loss per term, one entry per epoch
  bool pca_fallback = false;
};

/// Runs the epoch / minibatch SGD loop. Deterministic for a fixed seed.
/// Throws BadParams for invalid settings and NaNGuard on non-finite loss.
TrainResult train(const Dataset& data, const TrainConfig& config);

}  // namespace fuzzydr
