#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hon {

enum class ErrorKind {
  MalformedLine,
  EmptyInput,
  SupportViolation,
  DanglingPrefix,
  UnknownEntity,
  NonConvergence,
  UniverseMismatch,
  InfeasibleConfig,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `kind()` is stable and is what the
/// CLI prints in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hon
