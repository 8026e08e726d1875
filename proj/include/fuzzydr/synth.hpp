#pragma once

// Small synthetic datasets: Gaussian blobs, a noisy circle and a rolled strip.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "fuzzydr/embed.hpp"

namespace fuzzydr {

enum class SynthKind { Blobs, Circle, SwissLite };

/// Named numeric parameters. Recognised keys and defaults:
///   blobs      n=500 c=2 d=10 sep=10 std=1
///   circle     n=300 r=1 noise=0 d=2
///   swiss_lite n=500 noise=0 height=10
using SynthParams = std::map<std::string, double>;

/// "blobs" | "circle" | "swiss_lite"; throws BadParams otherwise.
SynthKind parse_synth_kind(std::string_view name);
std::string to_string(SynthKind kind);
bool is_synth_kind(std::string_view name);

/// Parses "n=500,sep=10"; throws BadParams.
SynthParams parse_synth_params(std::string_view text);

/// Fills in defaults and rejects unknown keys or invalid values (BadParams).
SynthParams resolve_synth_params(SynthKind kind, const SynthParams& given);

/// Deterministic for a fixed seed. Blob centres sit on a regular simplex with
/// pairwise distance `sep`, labels cycle through the clusters. Circle and
/// swiss_lite points are labelled by angular sector.
Dataset synth(SynthKind kind, const SynthParams& params, std::uint64_t seed);

}  // namespace fuzzydr
