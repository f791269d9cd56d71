#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace finring {

/// Domain error cases raised by the library. The CLI prints the name of the
/// case and exits with status 1.
enum class Errc {
  ShapeMismatch,
  CharIncompatible,
  NotAssociative,
  NotAnIdeal,
  NoIdentity,
  ParameterOutOfRange,
  GenerationFailed,
  NotIdempotentModJ,
  NilpotentInput,
  InvalidSextuple,
  InvalidBasisChange,
  NotNilpotent,
  NotCubeZero,
  BudgetExceeded,
  ParseError,
  ChecksumMismatch,
  InvalidDims,
};

inline std::string_view to_string(Errc e) {
  switch (e) {
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::CharIncompatible: return "CharIncompatible";
    case Errc::NotAssociative: return "NotAssociative";
    case Errc::NotAnIdeal: return "NotAnIdeal";
    case Errc::NoIdentity: return "NoIdentity";
    case Errc::ParameterOutOfRange: return "ParameterOutOfRange";
    case Errc::GenerationFailed: return "GenerationFailed";
    case Errc::NotIdempotentModJ: return "NotIdempotentModJ";
    case Errc::NilpotentInput: return "NilpotentInput";
    case Errc::InvalidSextuple: return "InvalidSextuple";
    case Errc::InvalidBasisChange: return "InvalidBasisChange";
    case Errc::NotNilpotent: return "NotNilpotent";
    case Errc::NotCubeZero: return "NotCubeZero";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::ParseError: return "ParseError";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::InvalidDims: return "InvalidDims";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace finring
