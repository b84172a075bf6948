#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace persuasion {

enum class ErrorCode {
  kConstantUtility,
  kDimensionMismatch,
  kInvalidLottery,
  kInvalidBelief,
  kInvalidUtility,
  kEmptyMenu,
  kAlphaOutOfRange,
  kInfeasible,
  kUnbounded,
  kNotBayesPlausible,
  kSupportMismatch,
  kInvalidCostSpec,
  kGridMissingPrior,
  kNonConvergence,
  kNotConstantMenu,
  kUnknownAxiom,
  kParseError,
  kValidationError,
  kUnknownCommand,
  kIoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace persuasion
