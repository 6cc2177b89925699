#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sigmalab {

enum class ErrorKind {
  InvalidArgument,
  BoundaryNode,
  UnsupportedOrder,
  DegreeTooHigh,
  NotHarmonic,
  NotASolution,
  NotPositiveDefinite,
  MaxIterExceeded,
  EllipticityLost,
  LineSearchStalled,
  LinearSolveFailure,
  NotConvex,
  NoInteriorPoint,
  NotMonotone,
  ZOutOfRange,
  Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sigmalab
