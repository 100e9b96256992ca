#include "toepdecomp/error.hpp"

namespace toepdecomp {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::SingularMinor: return "SingularMinor";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotSelfReciprocal: return "NotSelfReciprocal";
    case ErrorKind::DerivativeVanishes: return "DerivativeVanishes";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::InfeasibleSeparation: return "InfeasibleSeparation";
    case ErrorKind::InvalidIndex: return "InvalidIndex";
    case ErrorKind::NonRealWeights: return "NonRealWeights";
  }
  return "Unknown";
}

}  // namespace toepdecomp
