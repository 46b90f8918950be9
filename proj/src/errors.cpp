#include "trajlab/errors.hpp"

namespace trajlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kDegenerateMetric: return "degenerate metric";
    case ErrorCode::kInsufficientSamples: return "insufficient samples";
    case ErrorCode::kUnderdetermined: return "underdetermined at point";
    case ErrorCode::kStructure: return "structure axioms violated";
    case ErrorCode::kParameter: return "parameter error";
    case ErrorCode::kSyntax: return "syntax error";
    case ErrorCode::kMissingComponent: return "missing component";
    case ErrorCode::kCertification: return "certification failure";
    case ErrorCode::kLeftDomain: return "left chart domain";
    case ErrorCode::kBlowUp: return "blow-up";
    case ErrorCode::kNoLegendreDirection: return "no Legendre direction";
    case ErrorCode::kVariableOrder: return "variable osculating order";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

}  // namespace trajlab
