#pragma once

#include <stdexcept>
#include <string>

namespace aging {

enum class ErrorKind {
  InvalidParams,
  DegenerateDenominator,
  NoFixedPoint,
  NonFinite,
  DimensionMismatch,
  NonIntegerSplit,
  TooLarge,
  NonPhysical,
  RequiresZeroV,
  NoBistability,
  InvalidArgument,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Input-validation failures, as opposed to solver failures.
  bool is_validation() const noexcept {
    return kind_ == ErrorKind::InvalidParams || kind_ == ErrorKind::NonIntegerSplit ||
           kind_ == ErrorKind::TooLarge || kind_ == ErrorKind::RequiresZeroV ||
           kind_ == ErrorKind::InvalidArgument || kind_ == ErrorKind::DimensionMismatch;
  }

 private:
  ErrorKind kind_;
};

}  // namespace aging
