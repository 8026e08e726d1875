#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fuzzydr {

enum class ErrorCode {
  ReflexivityViolation,
  AntisymmetryViolation,
  TransitivityViolation,
  CapExceeded,
  DimensionZero,
  InvalidSimplex,
  NotFaceClosed,
  ShapeMismatch,
  NonMonotoneInput,
  NoPreimage,
  InvalidMeasure,
  NotLocallyMarkov,
  TriangleInequalityViolation,
  InvalidDistanceMatrix,
  DegenerateGromovProduct,
  NegativeScale,
  NonPositiveParam,
  NonPositiveScale,
  KTooLarge,
  DegenerateNeighborhood,
  NaNGuard,
  ZeroNorm,
  DegreeMismatch,
  ParseError,
  RaggedRows,
  EmptyFile,
  BadParams,
  Usage,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ReflexivityViolation: return "ReflexivityViolation";
    case ErrorCode::AntisymmetryViolation: return "AntisymmetryViolation";
    case ErrorCode::TransitivityViolation: return "TransitivityViolation";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::DimensionZero: return "DimensionZero";
    case ErrorCode::InvalidSimplex: return "InvalidSimplex";
    case ErrorCode::NotFaceClosed: return "NotFaceClosed";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonMonotoneInput: return "NonMonotoneInput";
    case ErrorCode::NoPreimage: return "NoPreimage";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::NotLocallyMarkov: return "NotLocallyMarkov";
    case ErrorCode::TriangleInequalityViolation: return "TriangleInequalityViolation";
    case ErrorCode::InvalidDistanceMatrix: return "InvalidDistanceMatrix";
    case ErrorCode::DegenerateGromovProduct: return "DegenerateGromovProduct";
    case ErrorCode::NegativeScale: return "NegativeScale";
    case ErrorCode::NonPositiveParam: return "NonPositiveParam";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::DegenerateNeighborhood: return "DegenerateNeighborhood";
    case ErrorCode::NaNGuard: return "NaNGuard";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace fuzzydr
