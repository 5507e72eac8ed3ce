#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nclp {

enum class ErrorCode {
  NotHermitian,
  DomainError,
  DimMismatch,
  ZeroTrace,
  NotPSD,
  InvalidEpsilon,
  BadExponents,
  SymbolUndefined,
  NotTriangular,
  CornerNotAnnihilated,
  InvalidBlocks,
  InvalidBasis,
  ConfigInvalid,
  IoError,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nclp
