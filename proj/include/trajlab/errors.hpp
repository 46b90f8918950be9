#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trajlab {

enum class ErrorCode {
  kDomain,
  kDegenerateMetric,
  kInsufficientSamples,
  kUnderdetermined,
  kStructure,
  kParameter,
  kSyntax,
  kMissingComponent,
  kCertification,
  kLeftDomain,
  kBlowUp,
  kNoLegendreDirection,
  kVariableOrder,
  kInvalidArgument,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Expression syntax errors carry the 1-based column of the offending token.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int column)
      : Error(ErrorCode::kSyntax, message), column_(column) {}

  int column() const noexcept { return column_; }

 private:
  int column_;
};

}  // namespace trajlab
