#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gns {

enum class ErrorKind {
  NonHermitian,
  DimensionMismatch,
  NotUnital,
  DegenerateSplit,
  ZeroVector,
  NotDensity,
  NotPositive,
  SizeOverflow,
  NotUnitary,
  NonPositiveQ,
  RankIncrease,
  InvalidParity,
  CornerViolation,
  NotProjector,
  SchemaError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gns
