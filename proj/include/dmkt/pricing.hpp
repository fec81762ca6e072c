#pragma once

#include "dmkt/core/event_ledger.hpp"
#include "dmkt/license.hpp"
#include "dmkt/risk.hpp"

namespace dmkt {

struct PricingParams {
  double alpha = 1.0;               // risk premium coefficient
  double beta = 0.8;                // maximum noise discount
  double gamma = 2.0;               // low-reputation buyer premium coefficient
  double rep_threshold = 0.5;
  double exclusivity_mult = 1.5;
  double resale_mult = 1.25;
  double lifespan_half_gain = 0.5;  // per year of access
  double lifespan_cap_years = 2.0;
  double demand_min = 0.5;
  double demand_max = 2.0;
};

// Throws ConfigError naming the offending field.
void validate(const PricingParams& p);

// Multiplicative terms of a recommendation, kept for audit.
struct PriceFactors {
  double volume = 0.0;       // base unit value * quantity
  double risk = 1.0;         // 1 + alpha * R
  double noise = 1.0;        // 1 - beta * n
  double exclusivity = 1.0;
  double resale = 1.0;
  double lifespan = 1.0;
  double demand = 1.0;

  double product() const noexcept {
    return volume * risk * noise * exclusivity * resale * lifespan * demand;
  }
  // Everything except the mandatory noise discount: the ask a seller would
  // enter to land exactly on the recommendation after the discount.
  double pre_discount() const noexcept {
    return volume * risk * exclusivity * resale * lifespan * demand;
  }
};

struct PriceQuote {
  double recommended = 0.0;
  PriceFactors factors;
};

Record to_record(const PriceQuote& q);

// clamp((1 + open buy specs) / (1 + active listings), demand bounds).
double demand_index(int open_buy_specs, int active_listings, const PricingParams& params);

// Lifespan factor: 1 + half_gain * min(years, cap) with ticks read as days;
// perpetual takes the cap.
double lifespan_factor(const Lifespan& lifespan, const PricingParams& params);

// Throws InvalidPricingInput on a non-positive value or quantity, noise
// outside [0,1], demand outside its bounds, or a negative lifespan.
PriceQuote recommend_price(double base_unit_value, long quantity, const RiskAssessment& risk,
                           double noise_level, const License& license, double demand,
                           const PricingParams& params);

// Sellers ask what they like; the noise discount is not negotiable.
// Throws InvalidAsk for a non-positive ask.
double enforced_listing_price(double seller_ask, double noise_level, const PricingParams& params);

// Low-reputation buyers pay a premium that goes to the seller.
double buyer_effective_price(double listing_price, double buyer_reputation,
                             const PricingParams& params);

}  // namespace dmkt
