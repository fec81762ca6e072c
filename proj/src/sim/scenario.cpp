#include "dmkt/sim/scenario.hpp"

#include <numeric>

#include "dmkt/sim/agents.hpp"

namespace dmkt::sim {

ScenarioResult run_scenario(const ScenarioConfig& config) {
  validate(config);
  MarketConfig mc = config.market;
  mc.seed = derive_seed(config.seed, label_salt("market"));
  Marketplace market(mc);

  std::vector<Agent> agents = make_agents(config);
  for (const Agent& a : agents) {
    const RoleSet roles{is_seller(a.archetype) ? Role::Seller : Role::Buyer};
    market.register_member(a.id, roles, 0, std::string(to_string(a.archetype)));
  }

  std::vector<std::size_t> order(agents.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng(derive_seed(config.seed, label_salt("order"))).shuffle(order.begin(), order.end());

  for (Tick tick = 0; tick < config.ticks; ++tick) {
    market.begin_tick(tick);
    for (std::size_t idx : order) {
      Agent& a = agents[idx];
      for (const Intent& i : step_agent(a, market, tick)) {
        if (market.member(a.id).expelled) break;
        execute(a, i, market, tick);
      }
    }
    // Orchestrator: release escrow for everything delivered this tick.
    std::vector<TxnId> delivered;
    for (const auto& [id, t] : market.transactions()) {
      if (t.state == TxnState::DataDelivered) delivered.push_back(id);
    }
    for (const TxnId& id : delivered) market.settle_exchange(id, tick);
  }

  ScenarioMetrics metrics = compute_metrics(market.ledger());
  return {std::move(market), std::move(metrics)};
}

}  // namespace dmkt::sim
