#include "dmkt/pricing.hpp"

#include <algorithm>
#include <string>

#include "dmkt/errors.hpp"

namespace dmkt {

namespace {

void require(bool ok, const char* path, const char* what) {
  if (!ok) throw ConfigError(std::string("params.pricing.") + path, what);
}

void check_noise(double n) {
  if (!(n >= 0.0 && n <= 1.0)) {
    throw MarketError(ErrorCode::InvalidPricingInput, "noise level outside [0,1]");
  }
}

}  // namespace

void validate(const PricingParams& p) {
  require(p.alpha >= 0.0, "alpha", "must be >= 0");
  require(p.beta >= 0.0 && p.beta <= 1.0, "beta", "must lie in [0,1]");
  require(p.gamma >= 0.0, "gamma", "must be >= 0");
  require(p.rep_threshold >= 0.0 && p.rep_threshold <= 1.0, "rep_threshold", "must lie in [0,1]");
  require(p.exclusivity_mult >= 1.0, "exclusivity_mult", "must be >= 1");
  require(p.resale_mult >= 1.0, "resale_mult", "must be >= 1");
  require(p.lifespan_half_gain >= 0.0, "lifespan_half_gain", "must be >= 0");
  require(p.lifespan_cap_years >= 0.0, "lifespan_cap_years", "must be >= 0");
  require(p.demand_min > 0.0, "demand_bounds", "lower bound must be > 0");
  require(p.demand_min <= 1.0 && p.demand_max >= 1.0, "demand_bounds", "must bracket 1");
}

Record to_record(const PriceQuote& q) {
  Record r;
  r["recommended"] = q.recommended;
  Record f;
  f["volume"] = q.factors.volume;
  f["risk"] = q.factors.risk;
  f["noise"] = q.factors.noise;
  f["exclusivity"] = q.factors.exclusivity;
  f["resale"] = q.factors.resale;
  f["lifespan"] = q.factors.lifespan;
  f["demand"] = q.factors.demand;
  r["factors"] = std::move(f);
  return r;
}

double demand_index(int open_buy_specs, int active_listings, const PricingParams& params) {
  const double raw = (1.0 + std::max(open_buy_specs, 0)) / (1.0 + std::max(active_listings, 0));
  return std::clamp(raw, params.demand_min, params.demand_max);
}

double lifespan_factor(const Lifespan& lifespan, const PricingParams& params) {
  if (lifespan.is_perpetual()) return 1.0 + params.lifespan_half_gain * params.lifespan_cap_years;
  const double years = static_cast<double>(*lifespan.ticks) / 365.0;
  return 1.0 + params.lifespan_half_gain * std::min(years, params.lifespan_cap_years);
}

PriceQuote recommend_price(double base_unit_value, long quantity, const RiskAssessment& risk,
                           double noise_level, const License& license, double demand,
                           const PricingParams& params) {
  if (!(base_unit_value > 0.0)) throw MarketError(ErrorCode::InvalidPricingInput, "base unit value must be > 0");
  if (quantity < 1) throw MarketError(ErrorCode::InvalidPricingInput, "quantity must be >= 1");
  check_noise(noise_level);
  if (!(demand >= params.demand_min && demand <= params.demand_max)) {
    throw MarketError(ErrorCode::InvalidPricingInput, "demand index outside its bounds");
  }
  if (license.lifespan.ticks && *license.lifespan.ticks < 0) {
    throw MarketError(ErrorCode::InvalidPricingInput, "negative lifespan");
  }
  if (!(risk.normalized >= 0.0 && risk.normalized <= 1.0)) {
    throw MarketError(ErrorCode::InvalidPricingInput, "normalized risk outside [0,1]");
  }

  PriceQuote q;
  q.factors.volume = base_unit_value * static_cast<double>(quantity);
  q.factors.risk = 1.0 + params.alpha * risk.normalized;
  q.factors.noise = 1.0 - params.beta * noise_level;
  q.factors.exclusivity = license.exclusive ? params.exclusivity_mult : 1.0;
  q.factors.resale = license.resale_allowed ? params.resale_mult : 1.0;
  q.factors.lifespan = lifespan_factor(license.lifespan, params);
  q.factors.demand = demand;
  q.recommended = q.factors.product();
  return q;
}

double enforced_listing_price(double seller_ask, double noise_level, const PricingParams& params) {
  if (!(seller_ask > 0.0)) throw MarketError(ErrorCode::InvalidAsk, "ask must be > 0");
  check_noise(noise_level);
  return seller_ask * (1.0 - params.beta * noise_level);
}

double buyer_effective_price(double listing_price, double buyer_reputation,
                             const PricingParams& params) {
  if (!(buyer_reputation >= 0.0 && buyer_reputation <= 1.0)) {
    throw MarketError(ErrorCode::InvalidPricingInput, "buyer reputation outside [0,1]");
  }
  return listing_price *
         (1.0 + params.gamma * std::max(0.0, params.rep_threshold - buyer_reputation));
}

}  // namespace dmkt
