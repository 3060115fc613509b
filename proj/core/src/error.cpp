#include "shakedrill/error.hpp"

namespace shakedrill {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::RowCountMismatch: return "RowCountMismatch";
    case ErrorKind::NegativeIM: return "NegativeIM";
    case ErrorKind::InconsistentPeriodSet: return "InconsistentPeriodSet";
    case ErrorKind::OutOfBounds: return "OutOfBounds";
    case ErrorKind::InvalidSite: return "InvalidSite";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::NonFiniteSample: return "NonFiniteSample";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidWindow: return "InvalidWindow";
    case ErrorKind::NegativeEDP: return "NegativeEDP";
    case ErrorKind::OrderingViolation: return "OrderingViolation";
    case ErrorKind::UnknownDamageState: return "UnknownDamageState";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::NegativeCost: return "NegativeCost";
    case ErrorKind::InvalidTick: return "InvalidTick";
    case ErrorKind::UnknownRoom: return "UnknownRoom";
    case ErrorKind::MissingEDP: return "MissingEDP";
    case ErrorKind::ManifestError: return "ManifestError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

}  // namespace shakedrill
