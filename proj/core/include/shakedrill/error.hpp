#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shakedrill {

enum class ErrorKind {
  // ground-motion grid
  MalformedHeader,
  MalformedRow,
  RowCountMismatch,
  NegativeIM,
  InconsistentPeriodSet,
  OutOfBounds,
  InvalidSite,
  // time series
  CountMismatch,
  NonFiniteSample,
  InvalidConfig,
  InvalidWindow,
  // fragility
  NegativeEDP,
  OrderingViolation,
  UnknownDamageState,
  SchemaError,
  NegativeCost,
  // early warning
  InvalidTick,
  // scenario
  UnknownRoom,
  MissingEDP,
  ManifestError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the engine. `kind()` is the machine-readable
/// category; `what()` carries the location (line number, component id,
/// file path) where one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace shakedrill
