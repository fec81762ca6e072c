#include "dmkt/license.hpp"

#include <algorithm>

#include "dmkt/errors.hpp"

namespace dmkt {

std::string_view to_string(Purpose p) noexcept {
  switch (p) {
    case Purpose::ProductOptimization: return "ProductOptimization";
    case Purpose::MarketingAnalytics: return "MarketingAnalytics";
    case Purpose::ResearchAggregate: return "ResearchAggregate";
    case Purpose::Resale: return "Resale";
    case Purpose::ThirdPartyInference: return "ThirdPartyInference";
  }
  return "ProductOptimization";
}

std::optional<Purpose> purpose_from_string(std::string_view s) noexcept {
  for (Purpose p : kAllPurposes) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

std::string_view to_string(ViolationKind v) noexcept {
  switch (v) {
    case ViolationKind::Expired: return "Expired";
    case ViolationKind::UnpermittedPurpose: return "UnpermittedPurpose";
    case ViolationKind::ProhibitedResale: return "ProhibitedResale";
    case ViolationKind::ThirdPartyExtraction: return "ThirdPartyExtraction";
    case ViolationKind::SellerDoubleSale: return "SellerDoubleSale";
  }
  return "Expired";
}

std::string to_string(const ComplianceVerdict& v) {
  if (v.is_compliant()) return "Compliant";
  return "Violation(" + std::string(to_string(*v.violation)) + ")";
}

bool License::permits(Purpose p) const noexcept {
  return std::find(permitted_uses.begin(), permitted_uses.end(), p) != permitted_uses.end();
}

void validate_license(const License& license) {
  if (license.permitted_uses.empty()) {
    throw MarketError(ErrorCode::InvalidLicense, "permitted_uses is empty");
  }
  if (license.lifespan.ticks && *license.lifespan.ticks <= 0) {
    throw MarketError(ErrorCode::InvalidLicense, "lifespan must be a positive tick count");
  }
  if (license.permits(Purpose::Resale) != license.resale_allowed) {
    throw MarketError(ErrorCode::InvalidLicense, "Resale purpose disagrees with resale_allowed");
  }
  if (license.permits(Purpose::ThirdPartyInference) != license.third_party_extraction_allowed) {
    throw MarketError(ErrorCode::InvalidLicense,
                      "ThirdPartyInference purpose disagrees with third_party_extraction_allowed");
  }
}

bool is_active(const License& license, Tick now) {
  if (!license.granted_at) {
    throw MarketError(ErrorCode::NotYetGranted, "license " + license.license_id + " not settled");
  }
  if (license.lifespan.is_perpetual()) return true;
  return now < *license.granted_at + *license.lifespan.ticks;
}

ComplianceVerdict check_action(const License& license, const MemberId& actor, Purpose purpose,
                               Tick tick) {
  if (actor != license.buyer_id && actor != license.seller_id) {
    throw MarketError(ErrorCode::UnrelatedActor, actor + " is not party to " + license.license_id);
  }
  if (!license.granted_at || tick < *license.granted_at) {
    throw MarketError(ErrorCode::NotYetGranted, "license " + license.license_id + " not in force");
  }
  if (actor == license.seller_id && actor != license.buyer_id) return ComplianceVerdict::compliant();

  if (!is_active(license, tick)) return ComplianceVerdict::violated(ViolationKind::Expired);
  if (purpose == Purpose::Resale && !license.resale_allowed) {
    return ComplianceVerdict::violated(ViolationKind::ProhibitedResale);
  }
  if (purpose == Purpose::ThirdPartyInference && !license.third_party_extraction_allowed) {
    return ComplianceVerdict::violated(ViolationKind::ThirdPartyExtraction);
  }
  if (!license.permits(purpose)) return ComplianceVerdict::violated(ViolationKind::UnpermittedPurpose);
  return ComplianceVerdict::compliant();
}

ComplianceVerdict check_seller_double_sale(std::span<const License> licenses,
                                           const MemberId& seller, std::string_view category,
                                           Tick now) {
  for (const License& l : licenses) {
    if (l.seller_id != seller || l.category != category || !l.exclusive || !l.granted_at) continue;
    if (is_active(l, now)) return ComplianceVerdict::violated(ViolationKind::SellerDoubleSale);
  }
  return ComplianceVerdict::compliant();
}

Record to_record(const License& license) {
  Record r;
  r["license_id"] = license.license_id;
  r["seller_id"] = license.seller_id;
  r["buyer_id"] = license.buyer_id;
  r["category"] = license.category;
  r["exclusive"] = license.exclusive;
  r["lifespan_ticks"] = license.lifespan.ticks ? Record(*license.lifespan.ticks) : Record(nullptr);
  Record uses = Record::array();
  for (Purpose p : license.permitted_uses) uses.push_back(to_string(p));
  r["permitted_uses"] = std::move(uses);
  r["resale_allowed"] = license.resale_allowed;
  r["third_party_extraction_allowed"] = license.third_party_extraction_allowed;
  r["granted_at"] = license.granted_at ? Record(*license.granted_at) : Record(nullptr);
  return r;
}

License license_from_record(const Record& r) {
  try {
    License l;
    l.license_id = r.value("license_id", std::string{});
    l.seller_id = r.value("seller_id", std::string{});
    l.buyer_id = r.value("buyer_id", std::string{});
    l.category = r.at("category").get<std::string>();
    l.exclusive = r.at("exclusive").get<bool>();
    const auto& life = r.at("lifespan_ticks");
    if (!life.is_null()) l.lifespan = Lifespan::of_ticks(life.get<Tick>());
    for (const auto& u : r.at("permitted_uses")) {
      const auto p = purpose_from_string(u.get<std::string>());
      if (!p) throw MarketError(ErrorCode::InvalidLicense, "unknown purpose " + u.dump());
      l.permitted_uses.push_back(*p);
    }
    l.resale_allowed = r.at("resale_allowed").get<bool>();
    l.third_party_extraction_allowed = r.at("third_party_extraction_allowed").get<bool>();
    if (r.contains("granted_at") && !r.at("granted_at").is_null()) {
      l.granted_at = r.at("granted_at").get<Tick>();
    }
    return l;
  } catch (const nlohmann::json::exception& e) {
    throw MarketError(ErrorCode::InvalidLicense, e.what());
  }
}

}  // namespace dmkt
