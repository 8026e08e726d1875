#include "fuzzydr/scale_dist.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "fuzzydr/error.hpp"

namespace fuzzydr {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::NonPositiveParam, std::string(name) + " must be positive and finite");
  }
}

void require_scale(double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::NegativeScale, "scale " + std::to_string(t) + " is negative");
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string_view::npos ? std::string() : std::string(s.substr(b, e - b + 1));
}

}  // namespace

ScaleDistribution ScaleDistribution::exponential(double nu) {
  require_positive(nu, "nu");
  return {Family::Exponential, nu, 0.0};
}

ScaleDistribution ScaleDistribution::weibull(double lambda, double k) {
  require_positive(lambda, "lambda");
  require_positive(k, "k");
  return {Family::Weibull, lambda, k};
}

ScaleDistribution ScaleDistribution::loglogistic(double a, double b) {
  require_positive(a, "a");
  require_positive(b, "b");
  return {Family::LogLogistic, a, b};
}

ScaleDistribution ScaleDistribution::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string name = trim(text.substr(0, colon));
  std::map<std::string, double> params;
  if (colon != std::string_view::npos) {
    std::string rest(text.substr(colon + 1));
    std::istringstream is(rest);
    std::string item;
    while (std::getline(is, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::BadParams, "expected key=value in '" + item + "'");
      const std::string key = trim(std::string_view(item).substr(0, eq));
      const std::string val = trim(std::string_view(item).substr(eq + 1));
      try {
        std::size_t used = 0;
        params[key] = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
      } catch (const std::exception&) {
        throw Error(ErrorCode::BadParams, "parameter " + key + " is not a number: '" + val + "'");
      }
    }
  }
  auto take = [&](const char* key, double fallback) {
    auto it = params.find(key);
    double v = fallback;
    if (it != params.end()) {
      v = it->second;
      params.erase(it);
    }
    return v;
  };
  try {
    ScaleDistribution out = [&] {
      if (name == "exponential") return exponential(take("nu", 1.0));
      if (name == "weibull") {
        const double lambda = take("lambda", 1.0);
        return weibull(lambda, take("k", 1.0));
      }
      if (name == "loglogistic") {
        const double a = take("a", 1.0);
        return loglogistic(a, take("b", 1.0));
      }
      throw Error(ErrorCode::BadParams, "unknown distribution family '" + name + "'");
    }();
    if (!params.empty()) {
      throw Error(ErrorCode::BadParams, "unknown parameter '" + params.begin()->first + "' for " + name);
    }
    return out;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonPositiveParam) throw Error(ErrorCode::BadParams, e.what());
    throw;
  }
}

std::string ScaleDistribution::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case Family::Exponential: os << "exponential:nu=" << p1_; break;
    case Family::Weibull: os << "weibull:lambda=" << p1_ << ",k=" << p2_; break;
    case Family::LogLogistic: os << "loglogistic:a=" << p1_ << ",b=" << p2_; break;
  }
  return os.str();
}

double ScaleDistribution::survival(double t) const {
  require_scale(t);
  switch (family_) {
    case Family::Exponential: return std::exp(-t / p1_);
    case Family::Weibull: return std::exp(-std::pow(t / p1_, p2_));
    case Family::LogLogistic: return 1.0 / (1.0 + p1_ * std::pow(t, 2.0 * p2_));
  }
  return 0.0;
}

double ScaleDistribution::cdf(double t) const {
  require_scale(t);
  switch (family_) {
    case Family::Exponential: return -std::expm1(-t / p1_);
    case Family::Weibull: return -std::expm1(-std::pow(t / p1_, p2_));
    case Family::LogLogistic: {
      const double u = p1_ * std::pow(t, 2.0 * p2_);
      return u / (1.0 + u);
    }
  }
  return 0.0;
}

double ScaleDistribution::density(double t) const {
  require_scale(t);
  switch (family_) {
    case Family::Exponential: return std::exp(-t / p1_) / p1_;
    case Family::Weibull: {
      const double k = p2_;
      const double lambda = p1_;
      if (t == 0.0) {
        if (k < 1.0) return std::numeric_limits<double>::infinity();
        return k == 1.0 ? 1.0 / lambda : 0.0;
      }
      const double z = t / lambda;
      return (k / lambda) * std::pow(z, k - 1.0) * std::exp(-std::pow(z, k));
    }
    case Family::LogLogistic: {
      const double a = p1_;
      const double b = p2_;
      if (t == 0.0) {
        if (2.0 * b < 1.0) return std::numeric_limits<double>::infinity();
        return 2.0 * b == 1.0 ? a : 0.0;
      }
      const double u = a * std::pow(t, 2.0 * b);
      return 2.0 * a * b * std::pow(t, 2.0 * b - 1.0) / ((1.0 + u) * (1.0 + u));
    }
  }
  return 0.0;
}

LogLogisticStandard umap_param_convert(double a, double b) {
  require_positive(a, "a");
  require_positive(b, "b");
  return {std::pow(a, -1.0 / (2.0 * b)), 2.0 * b};
}

std::pair<double, double> umap_param_unconvert(LogLogisticStandard standard) {
  require_positive(standard.alpha, "alpha");
  require_positive(standard.beta, "beta");
  return {std::pow(standard.alpha, -standard.beta), standard.beta / 2.0};
}

double generalized_inverse(const WeightToDistanceFn& f, double y, double tolerance) {
  double lo = f.lo;
  double hi = f.hi;
  if (f.eval(hi) >= y) return hi;
  if (!(f.eval(lo) >= y)) return lo;
  // Invariant: f(lo) >= y > f(hi); the supremum lies in [lo, hi].
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (f.eval(mid) >= y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SurvivalReport is_survival_function(const std::function<double(double)>& g, std::span<const double> grid,
                                    double tail_tolerance) {
  constexpr double kStep = 1e-6;
  constexpr double kJump = 1e-3;
  SurvivalReport r;
  auto fail = [&](bool& flag, double a, double b, const std::string& msg) {
    flag = false;
    if (!r.witness) {
      r.witness = std::make_pair(a, b);
      r.message = msg;
    }
  };
  if (grid.empty()) {
    r.starts_at_one = false;
    r.message = "empty grid";
    return r;
  }
  const double g0 = g(0.0);
  if (std::abs(g0 - 1.0) > 1e-9) fail(r.starts_at_one, 0.0, g0, "g(0) != 1");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (g(grid[i + 1]) > g(grid[i]) + 1e-12) {
      fail(r.decreasing, grid[i], grid[i + 1], "g increases between grid points");
    }
  }
  if (g(grid.back()) > tail_tolerance) fail(r.vanishes, grid.back(), g(grid.back()), "g does not vanish at the end");
  for (double t : grid) {
    if (std::abs(g(t + kStep) - g(t)) > kJump) {
      fail(r.right_continuous, t, t + kStep, "g jumps immediately to the right of a probe");
    }
  }
  return r;
}

}  // namespace fuzzydr
