#pragma once

// Scale distributions: the CDF families that turn distances into fuzzy
// weights via their survival functions, plus generalized inverses of
// weight-to-distance functions.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace fuzzydr {

enum class Family { Exponential, Weibull, LogLogistic };

/// A CDF family with positive parameters:
///   Exponential(nu)       cdf(t) = 1 - exp(-t / nu)
///   Weibull(lambda, k)    cdf(t) = 1 - exp(-(t / lambda)^k)
///   LogLogistic(a, b)     cdf(t) = a t^(2b) / (1 + a t^(2b))
class ScaleDistribution {
 public:
  static ScaleDistribution exponential(double nu);
  static ScaleDistribution weibull(double lambda, double k);
  static ScaleDistribution loglogistic(double a, double b);

  /// Parses "exponential:nu=1", "weibull:lambda=1,k=0.5" or
  /// "loglogistic:a=1,b=1". Throws BadParams.
  static ScaleDistribution parse(std::string_view text);
  std::string to_string() const;

  Family family() const noexcept { return family_; }
  double p1() const noexcept { return p1_; }
  double p2() const noexcept { return p2_; }

  /// Each throws NegativeScale for t < 0.
  double cdf(double t) const;
  double survival(double t) const;
  /// May be +inf at t = 0 for shapes below one.
  double density(double t) const;

  friend bool operator==(const ScaleDistribution&, const ScaleDistribution&) = default;

 private:
  ScaleDistribution(Family f, double p1, double p2) : family_(f), p1_(p1), p2_(p2) {}
  Family family_;
  double p1_;
  double p2_;
};

/// Standard log-logistic form 1 / (1 + (t / alpha)^-beta) of UMAP's (a, b).
struct LogLogisticStandard {
  double alpha;
  double beta;
};

/// beta = 2b, alpha = a^(-1 / 2b). Throws NonPositiveParam.
LogLogisticStandard umap_param_convert(double a, double b);
/// Inverse of umap_param_convert: returns (a, b).
std::pair<double, double> umap_param_unconvert(LogLogisticStandard standard);

/// A decreasing map from weights in [lo, hi] to distances, e.g. -ln(x).
struct WeightToDistanceFn {
  std::function<double(double)> eval;
  double lo = 0.0;
  double hi = 1.0;
  bool left_continuous = true;
};

/// sup{x in [lo, hi] : f(x) >= y}, by bisection to `tolerance`. Returns hi
/// when every point qualifies and lo when none does.
double generalized_inverse(const WeightToDistanceFn& f, double y, double tolerance = 1e-10);

struct SurvivalReport {
  bool starts_at_one = true;
  bool decreasing = true;
  bool vanishes = true;
  bool right_continuous = true;
  /// First offending grid pair (or probe and its right neighbour).
  std::optional<std::pair<double, double>> witness;
  std::string message;

  bool ok() const noexcept { return starts_at_one && decreasing && vanishes && right_continuous; }
};

/// Samples g on `grid` (ascending, starting at 0) and checks the survival
/// function properties. Right-continuity is probed at every grid point with
/// a one-sided step of 1e-6.
SurvivalReport is_survival_function(const std::function<double(double)>& g, std::span<const double> grid,
                                    double tail_tolerance = 1e-3);

}  // namespace fuzzydr
