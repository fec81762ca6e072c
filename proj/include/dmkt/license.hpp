#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dmkt/core/event_ledger.hpp"
#include "dmkt/core/types.hpp"

namespace dmkt {

enum class Purpose {
  ProductOptimization,
  MarketingAnalytics,
  ResearchAggregate,
  Resale,
  ThirdPartyInference,
};

inline constexpr std::array<Purpose, 5> kAllPurposes{
    Purpose::ProductOptimization, Purpose::MarketingAnalytics, Purpose::ResearchAggregate,
    Purpose::Resale, Purpose::ThirdPartyInference};

std::string_view to_string(Purpose p) noexcept;
std::optional<Purpose> purpose_from_string(std::string_view s) noexcept;

// Access duration. `ticks` unset means perpetual, which amounts to a sale.
struct Lifespan {
  std::optional<Tick> ticks;

  static Lifespan perpetual() { return {}; }
  static Lifespan of_ticks(Tick d) { return {d}; }
  bool is_perpetual() const noexcept { return !ticks.has_value(); }

  friend bool operator==(const Lifespan&, const Lifespan&) = default;
};

struct License {
  LicenseId license_id;
  MemberId seller_id;
  MemberId buyer_id;
  std::string category;  // the seller's data the license covers
  bool exclusive = false;
  Lifespan lifespan;
  std::vector<Purpose> permitted_uses;
  bool resale_allowed = false;
  bool third_party_extraction_allowed = false;
  std::optional<Tick> granted_at;  // stamped at settlement

  bool permits(Purpose p) const noexcept;

  friend bool operator==(const License&, const License&) = default;
};

// Throws InvalidLicense: empty permitted_uses, non-positive tick lifespan, or
// Resale / ThirdPartyInference membership disagreeing with its flag.
void validate_license(const License& license);

enum class ViolationKind {
  Expired,
  UnpermittedPurpose,
  ProhibitedResale,
  ThirdPartyExtraction,
  SellerDoubleSale,
};

std::string_view to_string(ViolationKind v) noexcept;

struct ComplianceVerdict {
  std::optional<ViolationKind> violation;  // empty means Compliant

  static ComplianceVerdict compliant() { return {}; }
  static ComplianceVerdict violated(ViolationKind k) { return {k}; }
  bool is_compliant() const noexcept { return !violation.has_value(); }

  friend bool operator==(const ComplianceVerdict&, const ComplianceVerdict&) = default;
};

std::string to_string(const ComplianceVerdict& v);

// Throws NotYetGranted for an unsettled license.
bool is_active(const License& license, Tick now);

// Verdict for `actor` using the data for `purpose` at `tick`. Checks run in
// fixed precedence: Expired, ProhibitedResale, ThirdPartyExtraction,
// UnpermittedPurpose. The seller is never restricted by its own license.
// Throws UnrelatedActor, or NotYetGranted when unsettled or tick < granted_at.
ComplianceVerdict check_action(const License& license, const MemberId& actor, Purpose purpose,
                               Tick tick);

// SellerDoubleSale when `seller` already granted an exclusive license on
// `category` that is still active at `now`.
ComplianceVerdict check_seller_double_sale(std::span<const License> licenses,
                                           const MemberId& seller, std::string_view category,
                                           Tick now);

Record to_record(const License& license);
// Throws InvalidLicense on a malformed record.
License license_from_record(const Record& r);

}  // namespace dmkt
