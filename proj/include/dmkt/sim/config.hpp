#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dmkt/core/event_ledger.hpp"
#include "dmkt/marketplace.hpp"
#include "dmkt/risk.hpp"

namespace dmkt::sim {

enum class Archetype { HonestSeller, JunkSeller, HonestBuyer, AdversaryBuyer, SubsampleFarmer };

std::string_view to_string(Archetype a) noexcept;
std::optional<Archetype> archetype_from_string(std::string_view s) noexcept;
// "honest-seller", "junk-seller", ... used as member id prefixes.
std::string_view slug(Archetype a) noexcept;

constexpr bool is_seller(Archetype a) noexcept {
  return a == Archetype::HonestSeller || a == Archetype::JunkSeller;
}

// Behaviour knobs. Sellers read the first block, buyers the second; the
// per-archetype defaults come from `default_params`.
struct AgentParams {
  std::string category = "activity/walking";

  // sellers
  double ask_multiplier = 1.0;   // relative to the recommended ask
  double noise_level = 0.25;
  double base_unit_value = 1.0;
  int points_per_listing = 200;
  bool exclusive = false;
  std::optional<Tick> lifespan_ticks = 90;  // unset: perpetual
  bool resale_allowed = false;
  double delivery_refusal_prob = 0.0;

  // buyers
  double budget_per_point = 10.0;
  double noise_tolerance = 0.5;
  double min_seller_reputation = 0.0;
  Tick min_lifespan_ticks = 30;
  bool exclusive_required = false;
  bool require_subsample = true;
  double reject_probability = 0.0;  // reject a subsample regardless of validation
  double funding_refusal_prob = 0.0;
  Purpose usage_purpose = Purpose::ProductOptimization;
  Tick cooldown_ticks = 5;
};

AgentParams default_params(Archetype a);

struct AgentGroup {
  Archetype archetype = Archetype::HonestSeller;
  int count = 0;
  AgentParams params;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  Tick ticks = 1;
  std::vector<AgentGroup> agents;
  MarketConfig market;  // market.seed is derived from `seed`
  std::map<std::string, HarmImpactVector> risk_categories;
};

std::map<std::string, HarmImpactVector> default_risk_categories();

// Throws ConfigError with the JSON path of the first bad field.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig parse_config_text(std::string_view text);

// Full validation of an in-memory config (parse_config calls it).
void validate(const ScenarioConfig& config);

}  // namespace dmkt::sim
