#include "hon/error.hpp"

namespace hon {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::DanglingPrefix: return "DanglingPrefix";
    case ErrorKind::UnknownEntity: return "UnknownEntity";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::UniverseMismatch: return "UniverseMismatch";
    case ErrorKind::InfeasibleConfig: return "InfeasibleConfig";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace hon
