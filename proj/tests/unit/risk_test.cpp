#include <gtest/gtest.h>

#include "dmkt/errors.hpp"
#include "dmkt/risk.hpp"
#include "oracles.hpp"

using namespace dmkt;

TEST(Risk, WalkingExample) {
  const auto a = assess_risk({4, 5, 2});
  EXPECT_EQ(a.raw_score, 20);
  EXPECT_NEAR(a.normalized, 20.0 / 30.0, 1e-12);
  EXPECT_EQ(a.band, RiskBand::High);
}

TEST(Risk, Extremes) {
  EXPECT_EQ(assess_risk({5, 5, 5}).raw_score, 30);
  EXPECT_EQ(assess_risk({5, 5, 5}).normalized, 1.0);
  EXPECT_EQ(assess_risk({5, 5, 5}).band, RiskBand::Critical);
  EXPECT_EQ(assess_risk({0, 0, 0}).raw_score, 0);
  EXPECT_EQ(assess_risk({0, 0, 0}).normalized, 0.0);
  EXPECT_EQ(assess_risk({1, 1, 1}).raw_score, 6);
  EXPECT_NEAR(assess_risk({1, 1, 1}).normalized, 0.2, 1e-15);
}

TEST(Risk, AllVectorsMatchBruteForce) {
  int checked = 0;
  for (int d = 0; d <= 5; ++d) {
    for (int r = 0; r <= 5; ++r) {
      for (int i = 0; i <= 5; ++i) {
        const auto a = assess_risk({d, r, i});
        ASSERT_EQ(a.raw_score, oracle::risk_raw(d, r, i));
        ASSERT_GE(a.raw_score, 0);
        ASSERT_LE(a.raw_score, 30);
        ASSERT_EQ(a.normalized, a.raw_score / 30.0);
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 216);
}

TEST(Risk, UnitIncrementWeights) {
  for (int d = 0; d < 5; ++d) {
    for (int r = 0; r < 5; ++r) {
      for (int i = 0; i < 5; ++i) {
        const int base = assess_risk({d, r, i}).raw_score;
        ASSERT_EQ(assess_risk({d + 1, r, i}).raw_score - base, 1);
        ASSERT_EQ(assess_risk({d, r + 1, i}).raw_score - base, 2);
        ASSERT_EQ(assess_risk({d, r, i + 1}).raw_score - base, 3);
      }
    }
  }
}

TEST(Risk, OutOfRangeImpact) {
  for (HarmImpactVector v : {HarmImpactVector{6, 0, 0}, HarmImpactVector{0, -1, 0},
                             HarmImpactVector{0, 0, 9}}) {
    try {
      assess_risk(v);
      FAIL();
    } catch (const MarketError& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidImpact);
    }
  }
}

TEST(RiskBands, Boundaries) {
  EXPECT_EQ(risk_band(0.0), RiskBand::Low);
  EXPECT_EQ(risk_band(0.2499999), RiskBand::Low);
  EXPECT_EQ(risk_band(0.25), RiskBand::Moderate);
  EXPECT_EQ(risk_band(0.5), RiskBand::High);
  EXPECT_EQ(risk_band(0.667), RiskBand::High);
  EXPECT_EQ(risk_band(0.75), RiskBand::Critical);
  EXPECT_EQ(risk_band(1.0), RiskBand::Critical);
  for (double bad : {-0.01, 1.01}) {
    try {
      risk_band(bad);
      FAIL();
    } catch (const MarketError& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidScore);
    }
  }
}
