#include "nclp/error.hpp"

namespace nclp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ZeroTrace: return "ZeroTrace";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::BadExponents: return "BadExponents";
    case ErrorCode::SymbolUndefined: return "SymbolUndefined";
    case ErrorCode::NotTriangular: return "NotTriangular";
    case ErrorCode::CornerNotAnnihilated: return "CornerNotAnnihilated";
    case ErrorCode::InvalidBlocks: return "InvalidBlocks";
    case ErrorCode::InvalidBasis: return "InvalidBasis";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace nclp
