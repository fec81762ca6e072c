#pragma once

#include <array>
#include <string_view>

namespace dmkt {

// Harm types in escalating severity; the underlying value is the weight the
// type contributes per impact level.
enum class HarmType : int { Distortion = 1, Revelation = 2, Intrusion = 3 };

inline constexpr int kMaxImpact = 5;
inline constexpr int kMaxRawRisk = 30;  // 1*5 + 2*5 + 3*5

// Impact level per harm type. 1 (minor) through 5 (critical); 0 means the
// data carries no exposure of that harm type.
struct HarmImpactVector {
  int distortion = 0;
  int revelation = 0;
  int intrusion = 0;

  friend constexpr bool operator==(const HarmImpactVector&, const HarmImpactVector&) = default;
};

enum class RiskBand { Low, Moderate, High, Critical };

std::string_view to_string(RiskBand b) noexcept;

struct RiskAssessment {
  HarmImpactVector impacts;
  int raw_score = 0;
  double normalized = 0.0;
  RiskBand band = RiskBand::Low;

  friend bool operator==(const RiskAssessment&, const RiskAssessment&) = default;
};

// Throws InvalidImpact when any level is outside [0,5].
RiskAssessment assess_risk(const HarmImpactVector& impacts);

// Quartile bands: [0,.25) Low, [.25,.5) Moderate, [.5,.75) High, [.75,1] Critical.
// Throws InvalidScore outside [0,1].
RiskBand risk_band(double normalized);

}  // namespace dmkt
