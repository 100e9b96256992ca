#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toepdecomp {

enum class ErrorKind {
  InvalidInput,
  ConvergenceFailure,
  SingularSystem,
  SingularMinor,
  IndexOutOfRange,
  NotSelfReciprocal,
  DerivativeVanishes,
  UnsupportedDegree,
  InfeasibleSeparation,
  InvalidIndex,
  NonRealWeights,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a machine-readable kind; the
// CLI maps it straight onto its error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace toepdecomp
