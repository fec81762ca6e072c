#include "dmkt/errors.hpp"

namespace dmkt {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::InconsistentDataset: return "InconsistentDataset";
    case ErrorCode::ClockViolation: return "ClockViolation";
    case ErrorCode::InvalidImpact: return "InvalidImpact";
    case ErrorCode::InvalidScore: return "InvalidScore";
    case ErrorCode::InvalidNoiseLevel: return "InvalidNoiseLevel";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidLicense: return "InvalidLicense";
    case ErrorCode::NotYetGranted: return "NotYetGranted";
    case ErrorCode::UnrelatedActor: return "UnrelatedActor";
    case ErrorCode::UnknownMember: return "UnknownMember";
    case ErrorCode::SelfTransaction: return "SelfTransaction";
    case ErrorCode::InvalidPricingInput: return "InvalidPricingInput";
    case ErrorCode::InvalidAsk: return "InvalidAsk";
    case ErrorCode::AccessDenied: return "AccessDenied";
    case ErrorCode::ExclusivityConflict: return "ExclusivityConflict";
    case ErrorCode::UnlistableProvenance: return "UnlistableProvenance";
    case ErrorCode::UnknownListing: return "UnknownListing";
    case ErrorCode::UnknownTransaction: return "UnknownTransaction";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::SubsamplingSuspendedError: return "SubsamplingSuspendedError";
    case ErrorCode::SubsampleQuotaExceeded: return "SubsampleQuotaExceeded";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MalformedLedger: return "MalformedLedger";
  }
  return "UnknownError";
}

}  // namespace dmkt
