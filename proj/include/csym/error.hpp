#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csym {

enum class ErrorKind {
  NonFinite,
  NotHermitian,
  NoConvergence,
  DimensionMismatch,
  NumericalBreakdown,
  NotCSymmetric,
  EpsTooSmall,
  DegenerateKernel,
  BudgetExhausted,
  NumericalAmbiguity,
  InvalidSpec,
  InvalidInput,
  NotCommuting,
  NotNormal,
  NotPositive,
  NotUnitary,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace csym
