#include "dmkt/risk.hpp"

#include <string>

#include "dmkt/errors.hpp"

namespace dmkt {

std::string_view to_string(RiskBand b) noexcept {
  switch (b) {
    case RiskBand::Low: return "Low";
    case RiskBand::Moderate: return "Moderate";
    case RiskBand::High: return "High";
    case RiskBand::Critical: return "Critical";
  }
  return "Low";
}

namespace {

void check_impact(int level, const char* name) {
  if (level < 0 || level > kMaxImpact) {
    throw MarketError(ErrorCode::InvalidImpact,
                      std::string(name) + " impact " + std::to_string(level) + " outside [0,5]");
  }
}

constexpr int weight(HarmType t) { return static_cast<int>(t); }

}  // namespace

RiskAssessment assess_risk(const HarmImpactVector& impacts) {
  check_impact(impacts.distortion, "distortion");
  check_impact(impacts.revelation, "revelation");
  check_impact(impacts.intrusion, "intrusion");

  RiskAssessment a;
  a.impacts = impacts;
  a.raw_score = weight(HarmType::Distortion) * impacts.distortion +
                weight(HarmType::Revelation) * impacts.revelation +
                weight(HarmType::Intrusion) * impacts.intrusion;
  a.normalized = static_cast<double>(a.raw_score) / kMaxRawRisk;
  a.band = risk_band(a.normalized);
  return a;
}

RiskBand risk_band(double normalized) {
  if (!(normalized >= 0.0 && normalized <= 1.0)) {
    throw MarketError(ErrorCode::InvalidScore, "normalized risk outside [0,1]");
  }
  if (normalized < 0.25) return RiskBand::Low;
  if (normalized < 0.5) return RiskBand::Moderate;
  if (normalized < 0.75) return RiskBand::High;
  return RiskBand::Critical;
}

}  // namespace dmkt
