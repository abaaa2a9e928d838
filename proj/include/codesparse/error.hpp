#pragma once

#include <stdexcept>
#include <string>

namespace codesparse {

enum class Errc {
  DimensionMismatch,
  MixedFields,
  DivisionByZero,
  IndexOutOfRange,
  BudgetExceeded,
  ZeroCode,
  ZeroCoordinate,
  NotACodeword,
  EmptyCode,
  WeightOutOfBand,
  HyperedgeTooLarge,
  MixedPrimes,
  NonAffinePredicate,
  ArityTooLarge,
  InternalInconsistency,
  InvalidArgument,
  ParseError,
};

inline const char* errc_name(Errc e) {
  switch (e) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::MixedFields: return "MixedFields";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ZeroCode: return "ZeroCode";
    case Errc::ZeroCoordinate: return "ZeroCoordinate";
    case Errc::NotACodeword: return "NotACodeword";
    case Errc::EmptyCode: return "EmptyCode";
    case Errc::WeightOutOfBand: return "WeightOutOfBand";
    case Errc::HyperedgeTooLarge: return "HyperedgeTooLarge";
    case Errc::MixedPrimes: return "MixedPrimes";
    case Errc::NonAffinePredicate: return "NonAffinePredicate";
    case Errc::ArityTooLarge: return "ArityTooLarge";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace codesparse
