#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optalloc {

enum class ErrorCode {
  DimensionMismatch,
  NonFinite,
  Asymmetric,
  NotNonnegativeDefinite,
  EmptyProblem,
  SingularInformation,
  InvalidAllocation,
  InvalidConfig,
  ProblemTooLarge,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a stable machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace optalloc
