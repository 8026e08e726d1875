#include "fuzzydr/synth.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "fuzzydr/error.hpp"

namespace fuzzydr {

namespace {

const SynthParams& defaults(SynthKind kind) {
  static const SynthParams blobs{{"n", 500}, {"c", 2}, {"d", 10}, {"sep", 10}, {"std", 1}};
  static const SynthParams circle{{"n", 300}, {"r", 1}, {"noise", 0}, {"d", 2}};
  static const SynthParams swiss{{"n", 500}, {"noise", 0}, {"height", 10}};
  switch (kind) {
    case SynthKind::Blobs: return blobs;
    case SynthKind::Circle: return circle;
    case SynthKind::SwissLite: return swiss;
  }
  return blobs;
}

int count_param(const SynthParams& p, const char* key, int minimum) {
  const double v = p.at(key);
  if (v != std::floor(v) || v < minimum || v > 1e7) {
    throw Error(ErrorCode::BadParams, std::string(key) + " must be an integer >= " + std::to_string(minimum));
  }
  return static_cast<int>(v);
}

double nonnegative_param(const SynthParams& p, const char* key) {
  const double v = p.at(key);
  if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::BadParams, std::string(key) + " must be >= 0");
  return v;
}

int sector(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return std::min(9, static_cast<int>(a / kTwoPi * 10.0));
}

}  // namespace

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "blobs") return SynthKind::Blobs;
  if (name == "circle") return SynthKind::Circle;
  if (name == "swiss_lite") return SynthKind::SwissLite;
  throw Error(ErrorCode::BadParams, "unknown synthetic dataset '" + std::string(name) + "'");
}

bool is_synth_kind(std::string_view name) { return name == "blobs" || name == "circle" || name == "swiss_lite"; }

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::Blobs: return "blobs";
    case SynthKind::Circle: return "circle";
    case SynthKind::SwissLite: return "swiss_lite";
  }
  return "blobs";
}

SynthParams parse_synth_params(std::string_view text) {
  SynthParams out;
  std::istringstream is{std::string(text)};
  std::string item;
  while (std::getline(is, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::BadParams, "expected key=value in '" + item + "'");
    try {
      std::size_t used = 0;
      const std::string val = item.substr(eq + 1);
      out[item.substr(0, eq)] = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw Error(ErrorCode::BadParams, "parameter '" + item + "' is not numeric");
    }
  }
  return out;
}

SynthParams resolve_synth_params(SynthKind kind, const SynthParams& given) {
  SynthParams p = defaults(kind);
  for (const auto& [key, value] : given) {
    if (!p.contains(key)) throw Error(ErrorCode::BadParams, "unknown parameter '" + key + "' for " + to_string(kind));
    p[key] = value;
  }
  count_param(p, "n", 1);
  switch (kind) {
    case SynthKind::Blobs: {
      const int c = count_param(p, "c", 1);
      const int d = count_param(p, "d", 1);
      if (c > d) throw Error(ErrorCode::BadParams, "blobs need c <= d");
      nonnegative_param(p, "sep");
      nonnegative_param(p, "std");
      break;
    }
    case SynthKind::Circle:
      count_param(p, "d", 2);
      nonnegative_param(p, "r");
      nonnegative_param(p, "noise");
      break;
    case SynthKind::SwissLite:
      nonnegative_param(p, "noise");
      nonnegative_param(p, "height");
      break;
  }
  return p;
}

Dataset synth(SynthKind kind, const SynthParams& given, std::uint64_t seed) {
  const SynthParams p = resolve_synth_params(kind, given);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = static_cast<int>(p.at("n"));
  Dataset out;
  out.labels.resize(static_cast<std::size_t>(n));
  switch (kind) {
    case SynthKind::Blobs: {
      const int c = static_cast<int>(p.at("c"));
      const int d = static_cast<int>(p.at("d"));
      const double offset = p.at("sep") / std::sqrt(2.0);
      out.points.resize(n, d);
      for (int i = 0; i < n; ++i) {
        const int label = i % c;
        out.labels[static_cast<std::size_t>(i)] = label;
        for (int a = 0; a < d; ++a) {
          // Two clusters sit at +-sep/2 on the first axis; more use the axes of a simplex.
          double centre = 0.0;
          if (c == 2) {
            centre = a == 0 ? (label == 0 ? -0.5 : 0.5) * p.at("sep") : 0.0;
          } else if (a == label) {
            centre = offset;
          }
          out.points(i, a) = centre + p.at("std") * normal(rng);
        }
      }
      break;
    }
    case SynthKind::Circle: {
      const int d = static_cast<int>(p.at("d"));
      out.points = Eigen::MatrixXd::Zero(n, d);
      for (int i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * unit(rng);
        out.points(i, 0) = p.at("r") * std::cos(angle);
        out.points(i, 1) = p.at("r") * std::sin(angle);
        if (p.at("noise") > 0.0) {
          for (int a = 0; a < d; ++a) out.points(i, a) += p.at("noise") * normal(rng);
        }
        out.labels[static_cast<std::size_t>(i)] = sector(angle);
      }
      break;
    }
    case SynthKind::SwissLite: {
      out.points.resize(n, 3);
      for (int i = 0; i < n; ++i) {
        const double t = 1.5 * std::numbers::pi * (1.0 + 2.0 * unit(rng));
        const double h = p.at("height") * unit(rng);
        out.points(i, 0) = t * std::cos(t);
        out.points(i, 1) = h;
        out.points(i, 2) = t * std::sin(t);
        if (p.at("noise") > 0.0) {
          for (int a = 0; a < 3; ++a) out.points(i, a) += p.at("noise") * normal(rng);
        }
        out.labels[static_cast<std::size_t>(i)] = std::min(9, static_cast<int>((t / std::numbers::pi - 1.5) / 3.0 * 10.0));
      }
      break;
    }
  }
  return out;
}

}  // namespace fuzzydr
