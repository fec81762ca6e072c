#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dmkt/core/random.hpp"
#include "dmkt/marketplace.hpp"
#include "dmkt/sim/config.hpp"

namespace dmkt::sim {

struct Agent {
  MemberId id;
  Archetype archetype = Archetype::HonestSeller;
  AgentParams params;
  HarmImpactVector impacts;  // for the agent's category
  Rng rng{0};

  std::optional<TxnId> current_txn;  // buyers: at most one open purchase
  Tick idle_until = 0;
  int listings_made = 0;
};

// Agents in config order; ids are "<slug>-<index>" per archetype. Each agent
// draws from its own stream seeded from (scenario seed, id).
std::vector<Agent> make_agents(const ScenarioConfig& config);

namespace intent {
struct List {
  SellSpec spec;
};
struct Search {
  BuySpec spec;
};
struct Advance {
  TxnId txn;
  TxnEventKind event;
};
struct RequestSubsample {
  TxnId txn;
};
struct RejectSubsample {
  TxnId txn;
};
struct Deliver {
  TxnId txn;
};
struct Use {
  LicenseId license;
  Purpose purpose;
};
}  // namespace intent

using Intent = std::variant<intent::List, intent::Search, intent::Advance,
                            intent::RequestSubsample, intent::RejectSubsample, intent::Deliver,
                            intent::Use>;

// Decides what the agent wants to do this tick from a read-only view of the
// market. Consumes draws from the agent's stream.
std::vector<Intent> step_agent(Agent& agent, const Marketplace& view, Tick tick);

// Carries out one intent. Domain errors caused by other agents' moves in the
// same tick (a listing withdrawn, a quota used up) are absorbed.
void execute(Agent& agent, const Intent& intent, Marketplace& market, Tick tick);

// The synthetic dataset a seller would offer at `tick`.
DataSet generate_dataset(Agent& agent, Tick tick);

}  // namespace dmkt::sim
