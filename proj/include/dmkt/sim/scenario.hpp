#pragma once

#include "dmkt/marketplace.hpp"
#include "dmkt/sim/config.hpp"
#include "dmkt/sim/metrics.hpp"

namespace dmkt::sim {

struct ScenarioResult {
  Marketplace market;
  ScenarioMetrics metrics;

  const EventLedger& ledger() const noexcept { return market.ledger(); }
};

// Registers every agent at tick 0, then for each tick lets agents act in a
// seed-derived order fixed for the whole run, and finally lets the
// orchestrator settle delivered transactions. Throws ConfigError.
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace dmkt::sim
