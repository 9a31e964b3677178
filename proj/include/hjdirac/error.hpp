#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hjdirac {

enum class ErrorKind {
  InvalidArgument,
  NullVector,
  BadSignature,
  SingularMetric,
  SingularJacobian,
  DomainBoundary,
  NonTimelikeSeparation,
  IllConditioned,
  NotCommuting,
  OffShell,
  NonSeparable,
  StepRejected,
  ChartBoundary,
  PartialEvaluationFailure,
  BoundaryIndex,
  NotIntegrable,
  TooLarge,
  DegenerateData,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hjdirac
