#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dmkt/core/event_ledger.hpp"

namespace dmkt::sim {

struct NoiseBandStats {
  std::string label;  // "[0,0.25)" ... "[0.75,1]"
  int settled = 0;
  std::optional<double> mean_unit_price;
};

struct BuyerGroupStats {
  int settled = 0;
  std::int64_t points = 0;
  std::int64_t paid_micros = 0;
  std::optional<double> mean_unit_price;   // mean over settlements
  std::optional<double> cost_per_point;    // total paid / total points
};

struct MemberEvent {
  MemberId member;
  Tick tick = 0;
  int unjustified_rejects = 0;  // suspensions only
};

struct ReputationPoint {
  Tick tick = 0;
  double reputation = 0.0;
};

struct ScenarioMetrics {
  std::size_t event_count = 0;
  int settled_count = 0;
  std::map<std::string, int> aborted_by_reason;
  std::array<NoiseBandStats, 4> noise_bands;
  std::map<std::string, BuyerGroupStats> buyers_by_archetype;
  std::optional<double> adversary_to_honest_price_ratio;
  // Per junk seller: expulsion tick or none.
  std::map<MemberId, std::optional<Tick>> junk_expulsions;
  std::optional<Tick> junk_expulsion_tick;  // last one, if every junk seller was expelled
  std::vector<MemberEvent> expulsions;
  std::vector<MemberEvent> suspensions;
  int license_violations = 0;
  std::int64_t buyer_spend_micros = 0;
  std::int64_t seller_receipts_micros = 0;
  std::int64_t refunds_micros = 0;
  std::int64_t held_micros = 0;
  bool currency_conserved = true;
  std::map<MemberId, std::vector<ReputationPoint>> trajectories;
  std::string event_log_hash;
};

// Everything is read off the ledger; archetypes come from the registration
// records. An empty ledger gives all-zero metrics.
ScenarioMetrics compute_metrics(const EventLedger& ledger);

// Noise band index for a level in [0,1].
int noise_band(double level) noexcept;

Record to_record(const ScenarioMetrics& m);
std::string metrics_json(const ScenarioMetrics& m);  // pretty, trailing newline
std::string metrics_text(const ScenarioMetrics& m);
std::string trajectories_csv(const ScenarioMetrics& m);

}  // namespace dmkt::sim
