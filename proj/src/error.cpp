#include "hjdirac/error.hpp"

#include "hjdirac/types.hpp"

namespace hjdirac {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NullVector: return "NullVector";
    case ErrorKind::BadSignature: return "BadSignature";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::DomainBoundary: return "DomainBoundary";
    case ErrorKind::NonTimelikeSeparation: return "NonTimelikeSeparation";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::OffShell: return "OffShell";
    case ErrorKind::NonSeparable: return "NonSeparable";
    case ErrorKind::StepRejected: return "StepRejected";
    case ErrorKind::ChartBoundary: return "ChartBoundary";
    case ErrorKind::PartialEvaluationFailure: return "PartialEvaluationFailure";
    case ErrorKind::BoundaryIndex: return "BoundaryIndex";
    case ErrorKind::NotIntegrable: return "NotIntegrable";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::DegenerateData: return "DegenerateData";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

const char* to_string(CausalType t) {
  switch (t) {
    case CausalType::Timelike: return "timelike";
    case CausalType::Null: return "null";
    case CausalType::Spacelike: return "spacelike";
  }
  return "unknown";
}

CausalType classify_norm2(double n2, double tol_null) {
  if (std::abs(n2) <= tol_null) return CausalType::Null;
  return n2 > 0.0 ? CausalType::Timelike : CausalType::Spacelike;
}

CausalType classify(const FourVector& v, double tol_null) {
  return classify_norm2(norm2(v), tol_null);
}

}  // namespace hjdirac
