#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dmkt {

// Every domain failure the marketplace can report. The CLI prints the
// name verbatim and exits with status 1.
enum class ErrorCode {
  EmptyDataset,
  InconsistentDataset,
  ClockViolation,
  InvalidImpact,
  InvalidScore,
  InvalidNoiseLevel,
  ShapeMismatch,
  InvalidLicense,
  NotYetGranted,
  UnrelatedActor,
  UnknownMember,
  SelfTransaction,
  InvalidPricingInput,
  InvalidAsk,
  AccessDenied,
  ExclusivityConflict,
  UnlistableProvenance,
  UnknownListing,
  UnknownTransaction,
  IllegalTransition,
  SubsamplingSuspendedError,
  SubsampleQuotaExceeded,
  ConfigError,
  MalformedLedger,
};

std::string_view error_name(ErrorCode code) noexcept;

class MarketError : public std::runtime_error {
 public:
  MarketError(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Configuration problems carry the path of the offending field, e.g.
// "agents[2].archetype".
class ConfigError : public MarketError {
 public:
  ConfigError(std::string path, const std::string& detail)
      : MarketError(ErrorCode::ConfigError, path + ": " + detail),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace dmkt
